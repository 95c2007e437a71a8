// Copyright 2026 The Tartarian Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tartarian/config.hpp"
#include "tartarian/depgraph.hpp"
#include "tartarian/error.hpp"
#include "tartarian/git.hpp"
#include "tartarian/gitio.hpp"
#include "tartarian/hashtag.hpp"
#include "tartarian/identifier.hpp"

namespace tartarian::cli {

enum ExitCode : int {
  kSuccess = 0,
  kEnvironmentError = 1,
  kUserError = 2,
  kDoctorFindings = 3,
};

namespace detail {

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::string short_hash(const std::string& h) { return h.substr(0, 7); }

inline std::string first_line(std::string_view s) {
  return std::string(s.substr(0, s.find('\n')));
}

/// Prints the offending line with a caret run under the diagnostic span.
inline void print_diagnostic(std::ostream& err, std::string_view message,
                             const ParseDiagnostic& d) {
  err << "error: " << to_string(d.reason) << ": " << d.detail << "\n";
  const std::size_t line_begin =
      d.span.begin == 0 ? 0 : message.rfind('\n', d.span.begin - 1) + 1;
  std::size_t line_end = message.find('\n', d.span.begin);
  if (line_end == std::string_view::npos) line_end = message.size();
  const std::size_t end = std::min(std::max(d.span.end, d.span.begin + 1), line_end + 1);
  err << "  | " << message.substr(line_begin, line_end - line_begin) << "\n";
  err << "  | " << std::string(d.span.begin - line_begin, ' ') << '^'
      << std::string(end > d.span.begin + 1 ? end - d.span.begin - 1 : 0, '~')
      << "\n";
}

inline void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << line << "\n";
  }
}

/// Repository at the top level of the working tree containing `dir`.
inline std::filesystem::path toplevel(const std::filesystem::path& dir) {
  Repository probe(dir);
  CommandResult r = probe.run({"rev-parse", "--show-toplevel"});
  if (!r.ok()) {
    throw Error(ErrorCode::GitFailure,
                dir.string() + " is not inside a git working tree");
  }
  return Repository::trimmed(r.out);
}

inline void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

}  // namespace detail

inline int cmd_commit(const Repository& repo, const std::string& message,
                      bool allow_untagged, std::ostream& out, std::ostream& err) {
  try {
    TCommitOptions options;
    options.allow_untagged = allow_untagged;
    const TCommitResult result = tcommit(message, repo, options);
    out << "[" << result.record.source_branch << " "
        << detail::short_hash(result.commit) << "] " << detail::first_line(message)
        << "\n";
    for (const std::string& tag : result.record.tags) {
      out << "  recorded " << tag << "\n";
    }
    return kSuccess;
  } catch (const TagSyntaxError& e) {
    for (const auto& d : e.diagnostics()) detail::print_diagnostic(err, message, d);
    err << "commit aborted; nothing was committed\n";
    return kUserError;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoTags) {
      err << "error: no Tartarian hashtags in the message\n"
          << "  add one such as #bugfix{JDK, 1.8+}, or pass --allow-untagged\n";
      return kUserError;
    }
    err << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
}

inline nlohmann::ordered_json to_json(const AnnotatedRecommendation& a) {
  const Recommendation& r = a.recommendation;
  return {{"commit", r.commit},
          {"target_branch", r.target_branch},
          {"priority", to_string(r.priority)},
          {"tag", render(r.matched)},
          {"status", to_string(a.status)},
          {"rationale", r.rationale}};
}

inline int cmd_recommend(const Repository& repo, const RecommendFilter& filter, bool json,
                         std::ostream& out, std::ostream& err) {
  try {
    const ToolConfig cfg = load_config(repo);
    RecommendationStore store(repo.root());
    RecommendResult result;
    if (store.exists()) {
      const std::vector<StoreRecord> records = store.read();
      std::vector<std::string> warnings;
      const DependencyGraph graph = build_graph(repo, cfg, &warnings);
      detail::print_warnings(err, warnings);
      result = recommend(repo, graph, records, filter, cfg.aliases);
      detail::print_warnings(err, result.warnings);
    }
    if (json) {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& a : result.items) doc.push_back(to_json(a));
      out << doc.dump(2) << "\n";
      return kSuccess;
    }
    if (result.items.empty()) {
      out << "no recommendations\n";
      return kSuccess;
    }
    std::vector<std::vector<std::string>> rows = {
        {"PRIORITY", "COMMIT", "TARGET", "TAG", "STATUS"}};
    for (const auto& a : result.items) {
      const Recommendation& r = a.recommendation;
      rows.push_back({detail::upper(to_string(r.priority)), detail::short_hash(r.commit),
                      r.target_branch, render(r.matched), detail::upper(to_string(a.status))});
    }
    detail::print_table(out, rows);
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
}

enum class GraphAction { Build, Export, Doctor };

struct GraphOptions {
  GraphAction action = GraphAction::Build;
  std::optional<int> threshold;
  bool global = false;
};

inline void print_report(std::ostream& out, const HellReport& report, int threshold,
                         ConflictScope scope) {
  out << "cycles: " << report.cycles.size() << "\n";
  for (const NodePath& c : report.cycles) {
    NodePath closed = c;
    closed.push_back(c.front());
    out << "  " << format_path(closed) << "\n";
  }
  out << "conflicts (" << (scope == ConflictScope::Global ? "global" : "per branch")
      << "): " << report.conflicts.size() << "\n";
  for (const Conflict& c : report.conflicts) {
    std::string versions, roots;
    for (const Version& v : c.versions) versions += (versions.empty() ? "" : ", ") + v.to_string();
    for (const std::string& r : c.roots) roots += (roots.empty() ? "" : ", ") + r;
    out << "  " << c.module << " {" << versions << "} in " << roots << "\n";
  }
  out << "long chains (> " << threshold << " edges): " << report.long_chains.size() << "\n";
  for (const NodePath& p : report.long_chains) {
    out << "  " << format_path(p) << " (" << p.size() - 1 << " edges)\n";
  }
}

inline int cmd_graph(const Repository& repo, const GraphOptions& options,
                     std::ostream& out, std::ostream& err) {
  try {
    const ToolConfig cfg = load_config(repo);
    std::vector<std::string> warnings;
    const DependencyGraph graph = build_graph(repo, cfg, &warnings);
    detail::print_warnings(err, warnings);
    switch (options.action) {
      case GraphAction::Build:
        out << graph.roots().size() << " roots, " << graph.module_count()
            << " modules, " << graph.edges().size() << " edges\n";
        return kSuccess;
      case GraphAction::Export:
        out << to_dot(graph);
        return kSuccess;
      case GraphAction::Doctor: {
        const int threshold = options.threshold.value_or(cfg.chain_threshold);
        if (threshold < 1) {
          err << "error: --threshold must be >= 1\n";
          return kUserError;
        }
        const ConflictScope scope =
            options.global ? ConflictScope::Global : ConflictScope::PerRoot;
        const HellReport report = diagnose(graph, threshold, scope);
        print_report(out, report, threshold, scope);
        return report.clean() ? kSuccess : kDoctorFindings;
      }
    }
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
}

inline nlohmann::ordered_json to_json(const MineReport& report) {
  nlohmann::ordered_json doc;
  doc["needle"] = report.needle;
  doc["branches"] = report.branches;
  doc["total"] = report.total;
  for (MessageCategory c : kAllCategories) {
    doc[std::string(json_key(c))] = {{"count", report.count(c)},
                                     {"percent", report.percent(c)}};
  }
  auto& matched = doc["matched"] = nlohmann::ordered_json::array();
  for (const MinedCommit& m : report.matched) {
    matched.push_back({{"commit", m.hash},
                       {"branch", m.branch},
                       {"category", json_key(m.category)},
                       {"subject", detail::first_line(m.message)}});
  }
  return doc;
}

inline int cmd_mine(const Repository& repo, const std::string& needle,
                    std::vector<std::string> branches, bool json, std::ostream& out,
                    std::ostream& err) {
  try {
    const ToolConfig cfg = load_config(repo);
    if (branches.empty()) {
      for (const BranchSpec& b : cfg.branches) branches.push_back(b.name);
    }
    const MineReport report = mine(repo, branches, needle, cfg.maintenance_verbs);
    if (json) {
      out << to_json(report).dump(2) << "\n";
      return kSuccess;
    }
    std::string joined;
    for (const std::string& b : report.branches) joined += (joined.empty() ? "" : ", ") + b;
    out << "branches: " << joined << "\n";
    out << "needle: \"" << report.needle << "\"\n";
    std::vector<std::vector<std::string>> rows(2);
    rows[0].push_back("total");
    rows[1].push_back(std::to_string(report.total));
    for (MessageCategory c : kAllCategories) {
      rows[0].emplace_back(to_string(c));
      rows[1].push_back(std::to_string(report.count(c)) + " (" + report.percent(c) + "%)");
    }
    detail::print_table(out, rows);
    for (const MinedCommit& m : report.matched) {
      out << "  " << detail::short_hash(m.hash) << "  " << m.branch << "  ["
          << to_string(m.category) << "] " << detail::first_line(m.message) << "\n";
    }
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
}

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recommends release branches to cherry-pick tagged commits into", "tartarian"};
  app.require_subcommand(1);
  std::string directory = ".";
  app.add_option("-C", directory, "Run as if started in this directory");

  std::string message;
  bool allow_untagged = false;
  auto* commit = app.add_subcommand("commit", "Commit staged changes with hashtags");
  commit->add_option("-m,--message", message, "Commit message")->required();
  commit->add_flag("--allow-untagged", allow_untagged, "Permit a message without hashtags");

  RecommendFilter filter;
  std::string filter_branch;
  bool json = false;
  auto* rec = app.add_subcommand("recommend", "List cherry-pick recommendations");
  rec->add_option("--branch", filter_branch, "Only recommendations targeting this branch");
  rec->add_flag("--all", filter.all, "Recommendations for every branch");
  rec->add_flag("--json", json, "Machine-readable output");

  GraphOptions graph_options;
  auto* graph = app.add_subcommand("graph", "Inspect the dependency graph");
  graph->require_subcommand(1);
  graph->add_subcommand("build", "Print node and edge counts");
  bool dot = false;
  auto* exp = graph->add_subcommand("export", "Print the graph");
  exp->add_flag("--dot", dot, "Graphviz DOT output (the default)");
  auto* doctor = graph->add_subcommand("doctor", "Report cycles, conflicts and long chains");
  int threshold = 0;
  doctor->add_option("--threshold", threshold, "Report chains with more edges than this");
  doctor->add_flag("--global", graph_options.global, "Check conflicts across all branches");

  std::string needle = "cherry picked";
  std::vector<std::string> mine_branches;
  auto* mine_cmd = app.add_subcommand("mine", "Classify cherry-picked commit messages");
  mine_cmd->add_option("--needle", needle, "Text a message must contain");
  mine_cmd->add_option("--branch", mine_branches, "Branch to scan (repeatable)");
  mine_cmd->add_flag("--json", json, "Machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUserError;
  }

  std::filesystem::path root;
  try {
    root = detail::toplevel(directory);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
  const Repository repo(root);

  if (*commit) return cmd_commit(repo, message, allow_untagged, out, err);
  if (*rec) {
    if (!filter_branch.empty()) filter.branch = filter_branch;
    return cmd_recommend(repo, filter, json, out, err);
  }
  if (*graph) {
    if (graph->got_subcommand("export")) {
      graph_options.action = GraphAction::Export;
    } else if (*doctor) {
      graph_options.action = GraphAction::Doctor;
      if (doctor->count("--threshold") > 0) graph_options.threshold = threshold;
    }
    return cmd_graph(repo, graph_options, out, err);
  }
  return cmd_mine(repo, needle, mine_branches, json, out, err);
}

}  // namespace tartarian::cli
