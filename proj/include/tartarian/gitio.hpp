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

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tartarian/depgraph.hpp"
#include "tartarian/error.hpp"
#include "tartarian/git.hpp"
#include "tartarian/hashtag.hpp"
#include "tartarian/identifier.hpp"
#include "tartarian/trace.hpp"

namespace tartarian {

// ---------------------------------------------------------------------------
// Recommendation store

/// One `tcommit`, as persisted in .tartarian/recommendations.json.
struct StoreRecord {
  std::string commit;
  std::string source_branch;
  std::string message;
  std::vector<std::string> tags;  // canonical renderings
  std::string created_at;         // UTC, "YYYY-MM-DDTHH:MM:SSZ"

  friend bool operator==(const StoreRecord&, const StoreRecord&) = default;
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  ::gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Append-only JSON array of StoreRecord under `<root>/.tartarian/`.
/// Writers serialize on an advisory flock of `.tartarian/lock`; readers
/// take no lock because every write replaces the file atomically.
class RecommendationStore {
 public:
  class Lock {
   public:
    explicit Lock(const std::filesystem::path& path) {
      fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
      if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
        const std::string why = std::strerror(errno);
        if (fd_ >= 0) ::close(fd_);
        throw Error(ErrorCode::StoreCorrupt,
                    "cannot lock " + path.string() + ": " + why);
      }
    }
    ~Lock() {
      if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
      }
    }
    Lock(const Lock&) = delete;
    Lock& operator=(const Lock&) = delete;

   private:
    int fd_ = -1;
  };

  explicit RecommendationStore(std::filesystem::path repo_root)
      : dir_(std::move(repo_root) / ".tartarian") {}

  std::filesystem::path file() const { return dir_ / "recommendations.json"; }
  std::filesystem::path lock_file() const { return dir_ / "lock"; }
  bool exists() const { return std::filesystem::exists(file()); }

  Lock lock() const {
    std::filesystem::create_directories(dir_);
    return Lock(lock_file());
  }

  std::vector<StoreRecord> read() const {
    std::ifstream in(file(), std::ios::binary);
    if (!in) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto corrupt = [&](const std::string& why) {
      return Error(ErrorCode::StoreCorrupt,
                   "store " + file().string() + " is corrupt: " + why);
    };
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw corrupt(e.what());
    }
    if (!doc.is_array()) throw corrupt("expected a JSON array");
    std::vector<StoreRecord> records;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto& r = doc[i];
      try {
        records.push_back({r.at("commit").get<std::string>(),
                           r.at("source_branch").get<std::string>(),
                           r.at("message").get<std::string>(),
                           r.at("tags").get<std::vector<std::string>>(),
                           r.at("created_at").get<std::string>()});
      } catch (const nlohmann::json::exception& e) {
        throw corrupt("record " + std::to_string(i) + ": " + e.what());
      }
    }
    return records;
  }

  /// Appends under a lock the caller already holds.
  void append(const StoreRecord& record, const Lock&) const {
    std::vector<StoreRecord> records = read();
    records.push_back(record);
    write(records);
  }

  void append(const StoreRecord& record) const {
    Lock held = lock();
    append(record, held);
  }

 private:
  void write(const std::vector<StoreRecord>& records) const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const StoreRecord& r : records) {
      doc.push_back({{"commit", r.commit},
                     {"source_branch", r.source_branch},
                     {"message", r.message},
                     {"tags", r.tags},
                     {"created_at", r.created_at}});
    }
    const std::filesystem::path tmp =
        dir_ / ("recommendations.json.tmp" + std::to_string(::getpid()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << doc.dump(2) << '\n';
      if (!out.flush()) {
        throw Error(ErrorCode::StoreCorrupt, "cannot write " + tmp.string());
      }
    }
    std::filesystem::rename(tmp, file());
  }

  std::filesystem::path dir_;
};

// ---------------------------------------------------------------------------
// tcommit

class TagSyntaxError : public Error {
 public:
  explicit TagSyntaxError(std::vector<ParseDiagnostic> diagnostics)
      : Error(ErrorCode::TagSyntaxError, summary(diagnostics)),
        diagnostics_(std::move(diagnostics)) {}

  const std::vector<ParseDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string summary(const std::vector<ParseDiagnostic>& diags) {
    std::string out = "malformed hashtags:";
    for (const auto& d : diags) {
      out += " [" + std::string(to_string(d.reason)) + "] " + d.detail + ";";
    }
    return out;
  }
  std::vector<ParseDiagnostic> diagnostics_;
};

struct TCommitOptions {
  bool allow_untagged = false;
  std::function<std::chrono::system_clock::time_point()> now =
      [] { return std::chrono::system_clock::now(); };
};

struct TCommitResult {
  std::string commit;
  StoreRecord record;
};

/// Validates the message's hashtags, commits the staged changes with the
/// message untouched, and records the commit in the store. Either both the
/// commit and the record are created or neither is.
inline TCommitResult tcommit(const std::string& message, const Repository& repo,
                             const TCommitOptions& options = {}) {
  ParseResult parsed = parse_message(message);
  if (!parsed.diagnostics.empty()) throw TagSyntaxError(std::move(parsed.diagnostics));
  if (parsed.hashtags.empty() && !options.allow_untagged) {
    throw Error(ErrorCode::NoTags,
                "no Tartarian hashtags in the message; add one such as "
                "#bugfix{JDK, 1.8+} or pass --allow-untagged");
  }
  const std::string branch = repo.current_branch();

  RecommendationStore store(repo.root());
  auto held = store.lock();
  store.read();  // refuse to commit on top of a store we could not append to

  const std::vector<std::string> args = {"commit", "-m", message};
  CommandResult r = repo.run(args);
  if (!r.ok()) {
    const std::string all = r.out + r.err;
    if (all.find("nothing to commit") != std::string::npos ||
        all.find("nothing added to commit") != std::string::npos ||
        all.find("no changes added to commit") != std::string::npos) {
      throw Error(ErrorCode::NothingStaged, "nothing staged to commit");
    }
    throw Repository::failure(args, r);
  }
  const std::string hash = repo.resolve("HEAD");

  StoreRecord record{hash, branch, message, {}, utc_timestamp(options.now())};
  for (const Hashtag& t : parsed.hashtags) record.tags.push_back(render(t));
  try {
    store.append(record, held);
  } catch (...) {
    if (repo.run({"rev-parse", "--verify", "--quiet", "HEAD~1"}).ok()) {
      repo.run({"reset", "--soft", "HEAD~1"});
    } else {
      repo.run({"update-ref", "-d", "HEAD"});
    }
    throw;
  }
  return {hash, std::move(record)};
}

// ---------------------------------------------------------------------------
// Reading recommendations back

struct RecommendFilter {
  std::optional<std::string> branch;
  bool all = false;
};

struct RecommendResult {
  std::vector<AnnotatedRecommendation> items;
  std::vector<std::string> warnings;
};

/// Recomputes recommendations for every stored commit against the current
/// graph. Without `all` or an explicit branch, only recommendations that
/// target the checked-out branch are kept.
inline RecommendResult recommend(const Repository& repo, const DependencyGraph& graph,
                                 std::span<const StoreRecord> records,
                                 const RecommendFilter& filter,
                                 const AliasMap& aliases) {
  std::optional<std::string> only = filter.branch;
  if (!only && !filter.all) only = repo.current_branch();

  struct Keyed {
    Recommendation rec;
    std::string created_at;
    std::size_t index;
  };
  std::vector<Keyed> keyed;
  RecommendResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const StoreRecord& r = records[i];
    if (!graph.has_branch(r.source_branch)) {
      result.warnings.push_back("skipping " + r.commit.substr(0, 7) +
                                ": branch '" + r.source_branch +
                                "' is not in the dependency graph");
      continue;
    }
    const TaggedCommit commit =
        TaggedCommit::from_message(r.commit, r.message, r.source_branch);
    for (Recommendation& rec : identify(commit, graph, aliases)) {
      if (only && rec.target_branch != *only) continue;
      keyed.push_back({std::move(rec), r.created_at, i});
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.rec.priority != b.rec.priority) return a.rec.priority > b.rec.priority;
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    if (a.index != b.index) return a.index < b.index;
    return a.rec.target_branch < b.rec.target_branch;
  });

  std::vector<Recommendation> recs;
  recs.reserve(keyed.size());
  for (Keyed& k : keyed) recs.push_back(std::move(k.rec));
  result.items = annotate_status(recs, repo);
  return result;
}

// ---------------------------------------------------------------------------
// Commit-message mining

enum class MessageCategory { BugFix, Backport, CodeMaintenance, Other };

inline constexpr std::array<MessageCategory, 4> kAllCategories = {
    MessageCategory::BugFix, MessageCategory::Backport,
    MessageCategory::CodeMaintenance, MessageCategory::Other};

constexpr std::string_view to_string(MessageCategory c) {
  switch (c) {
    case MessageCategory::BugFix: return "bug fixes";
    case MessageCategory::Backport: return "backports";
    case MessageCategory::CodeMaintenance: return "code maintenance";
    case MessageCategory::Other: return "other";
  }
  return "";
}

constexpr std::string_view json_key(MessageCategory c) {
  switch (c) {
    case MessageCategory::BugFix: return "bug_fixes";
    case MessageCategory::Backport: return "backports";
    case MessageCategory::CodeMaintenance: return "code_maintenance";
    case MessageCategory::Other: return "other";
  }
  return "";
}

inline const std::vector<std::string>& default_maintenance_verbs() {
  static const std::vector<std::string> kVerbs = {
      "add",    "added",    "remove",  "removed", "improve", "improved",
      "change", "changed",  "update",  "updated", "cleanup", "refactor"};
  return kVerbs;
}

namespace detail {

inline std::set<std::string> words_of(std::string_view text) {
  std::set<std::string> words;
  std::string current;
  for (char c : text) {
    if (is_tag_name_char(c)) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      words.insert(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.insert(std::move(current));
  return words;
}

}  // namespace detail

/// Keyword classification with strict precedence:
/// Backport, then BugFix, then CodeMaintenance, else Other.
inline MessageCategory classify(std::string_view message,
                                std::span<const std::string> maintenance_verbs =
                                    default_maintenance_verbs()) {
  const std::set<std::string> words = detail::words_of(message);
  std::set<TagKind> tags;
  for (const Hashtag& t : parse_message(message).hashtags) tags.insert(t.kind);
  const auto any_word = [&](std::initializer_list<std::string_view> list) {
    return std::any_of(list.begin(), list.end(),
                       [&](std::string_view w) { return words.contains(std::string(w)); });
  };

  if (any_word({"backport"}) || tags.contains(TagKind::Backport)) {
    return MessageCategory::Backport;
  }
  if (any_word({"fix", "fixes", "fixed", "bug"}) || tags.contains(TagKind::BugFix)) {
    return MessageCategory::BugFix;
  }
  const bool verb = std::any_of(
      maintenance_verbs.begin(), maintenance_verbs.end(),
      [&](const std::string& v) { return words.contains(detail::to_lower(v)); });
  if (verb || tags.contains(TagKind::Config) || tags.contains(TagKind::Improve) ||
      tags.contains(TagKind::Deprecated) || tags.contains(TagKind::Removed) ||
      tags.contains(TagKind::Inaccessible)) {
    return MessageCategory::CodeMaintenance;
  }
  return MessageCategory::Other;
}

struct BranchCommit {
  std::string hash;
  std::string branch;
  std::string message;
};

struct MinedCommit {
  std::string hash;
  std::string branch;
  std::string message;
  MessageCategory category = MessageCategory::Other;
};

struct MineReport {
  std::string needle;
  std::vector<std::string> branches;
  std::size_t total = 0;
  std::array<std::size_t, 4> counts{};
  std::vector<MinedCommit> matched;

  std::size_t count(MessageCategory c) const {
    return counts[static_cast<std::size_t>(c)];
  }

  /// count / total as a percentage in hundredths, rounded half up.
  std::uint64_t percent_hundredths(MessageCategory c) const {
    if (total == 0) return 0;
    const std::uint64_t n = count(c);
    return (n * 20000 + total) / (2 * total);
  }

  std::string percent(MessageCategory c) const {
    const std::uint64_t h = percent_hundredths(c);
    std::string frac = std::to_string(h % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(h / 100) + "." + frac;
  }
};

inline bool contains_ignore_case(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  const std::string h = detail::to_lower(haystack);
  return h.find(detail::to_lower(needle)) != std::string::npos;
}

/// Selects the commits whose message contains `needle` (case-insensitive),
/// counting each hash once, and classifies them.
inline MineReport summarize(std::span<const BranchCommit> commits,
                            std::string_view needle,
                            std::span<const std::string> maintenance_verbs =
                                default_maintenance_verbs()) {
  MineReport report;
  report.needle = std::string(needle);
  std::set<std::string> seen;
  for (const BranchCommit& c : commits) {
    if (!contains_ignore_case(c.message, needle)) continue;
    if (!seen.insert(c.hash).second) continue;
    const MessageCategory category = classify(c.message, maintenance_verbs);
    ++report.counts[static_cast<std::size_t>(category)];
    report.matched.push_back({c.hash, c.branch, c.message, category});
  }
  report.total = report.matched.size();
  return report;
}

inline MineReport mine(const Repository& repo, std::span<const std::string> branches,
                       std::string_view needle,
                       std::span<const std::string> maintenance_verbs =
                           default_maintenance_verbs()) {
  std::vector<BranchCommit> commits;
  for (const std::string& branch : branches) {
    for (LogEntry& e : scan_log(repo, branch)) {
      commits.push_back({std::move(e.hash), branch, std::move(e.message)});
    }
  }
  MineReport report = summarize(commits, needle, maintenance_verbs);
  report.branches.assign(branches.begin(), branches.end());
  return report;
}

}  // namespace tartarian
