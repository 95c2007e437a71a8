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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tartarian/depgraph.hpp"
#include "tartarian/error.hpp"
#include "tartarian/git.hpp"
#include "tartarian/hashtag.hpp"
#include "tartarian/trace.hpp"
#include "tartarian/version.hpp"

namespace tartarian {

struct TaggedCommit {
  std::string id;
  std::string message;
  std::vector<Hashtag> tags;
  std::string source_branch;

  /// Parses the tags out of `message`; diagnostics are dropped.
  static TaggedCommit from_message(std::string id, std::string message,
                                   std::string source_branch) {
    std::vector<Hashtag> tags = parse_message(message).hashtags;
    return {std::move(id), std::move(message), std::move(tags),
            std::move(source_branch)};
  }
};

struct Recommendation {
  std::string commit;
  std::string target_branch;
  Priority priority = Priority::Low;
  Hashtag matched;
  std::string rationale;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// The last version-like run in a branch name ("jetty-9.2.x" -> 9.2,
/// "release1.2" -> 1.2), digits and dots with an optional ".x" tail.
inline std::optional<Version> branch_version(std::string_view name) {
  std::optional<Version> last;
  std::size_t i = 0;
  while (i < name.size()) {
    if (!detail::is_digit(name[i])) {
      ++i;
      continue;
    }
    Version v;
    while (true) {
      std::uint64_t value = 0;
      bool overflow = false;
      while (i < name.size() && detail::is_digit(name[i])) {
        const std::uint64_t digit = static_cast<std::uint64_t>(name[i] - '0');
        if (value > (UINT64_MAX - digit) / 10) overflow = true;
        value = value * 10 + digit;
        ++i;
      }
      v.segments.push_back(overflow ? UINT64_MAX : value);
      if (i + 1 < name.size() && name[i] == '.' && detail::is_digit(name[i + 1])) {
        ++i;
        continue;
      }
      break;
    }
    if (i + 1 < name.size() && name[i] == '.' &&
        (name[i + 1] == 'x' || name[i + 1] == 'X')) {
      i += 2;
    }
    last = std::move(v);
  }
  return last;
}

inline bool branch_matches(std::string_view branch_name, const VersionConstraint& c) {
  if (std::holds_alternative<AnyVersion>(c)) return true;
  const std::optional<Version> v = branch_version(branch_name);
  return v && satisfies(*v, c);
}

inline bool branch_matches_series(std::string_view branch_name, const Series& series) {
  return branch_matches(branch_name, series);
}

/// Matches a commit's tags against the graph. #backport tags select
/// branches by name (the subject is the project itself); every other tag
/// selects branches whose direct dependency on the subject satisfies the
/// constraint. One recommendation per target branch, the highest priority
/// winning and the earliest tag breaking ties.
inline std::vector<Recommendation> identify(const TaggedCommit& c,
                                            const DependencyGraph& g,
                                            const AliasMap& aliases) {
  if (!g.has_branch(c.source_branch)) {
    throw Error(ErrorCode::UnknownSourceBranch,
                "branch '" + c.source_branch + "' is not in the dependency graph");
  }
  std::map<std::string, Recommendation> best;
  for (const Hashtag& tag : c.tags) {
    std::map<std::string, std::string> candidates;
    if (tag.kind == TagKind::Backport) {
      for (const auto& [branch, root] : g.roots()) {
        if (branch_matches(branch, tag.constraint)) {
          candidates[branch] =
              "branch " + branch + " matches " + to_string(tag.constraint);
        }
      }
    } else {
      for (const auto& [branch, version] : matching_dependencies(
               g, tag.subject, tag.constraint, aliases.rules_for(tag.subject))) {
        candidates[branch] = "branch " + branch + " depends on " + tag.subject +
                             "@" + version.to_string() + ", satisfying " +
                             to_string(tag.constraint);
      }
    }
    candidates.erase(c.source_branch);

    const Priority priority = priority_of(tag.kind);
    for (auto& [branch, why] : candidates) {
      auto it = best.find(branch);
      if (it != best.end() && it->second.priority >= priority) continue;
      best.insert_or_assign(branch,
                            Recommendation{c.id, branch, priority, tag, std::move(why)});
    }
  }

  std::vector<Recommendation> out;
  for (auto& [branch, rec] : best) out.push_back(std::move(rec));
  std::stable_sort(out.begin(), out.end(),
                   [](const Recommendation& a, const Recommendation& b) {
                     return a.priority > b.priority;
                   });
  return out;
}

enum class PickStatus { Pending, Done };

constexpr std::string_view to_string(PickStatus s) {
  return s == PickStatus::Done ? "Done" : "Pending";
}

struct AnnotatedRecommendation {
  Recommendation recommendation;
  PickStatus status = PickStatus::Pending;
};

/// A recommendation is Done when its target already contains the commit
/// (merged or fast-forwarded) or holds a cherry-pick trace back to it.
inline std::vector<AnnotatedRecommendation> annotate_status(
    std::span<const Recommendation> recs, const Repository& repo) {
  std::map<std::string, std::optional<std::set<std::string>>> containing;
  std::map<std::string, std::vector<LogEntry>> logs;

  const auto contained_in = [&](const std::string& commit,
                                const std::string& target) {
    auto it = containing.find(commit);
    if (it == containing.end()) {
      std::optional<std::set<std::string>> branches;
      if (repo.run({"cat-file", "-e", commit + "^{commit}"}).ok()) {
        auto list = repo.branches_containing(commit);
        branches.emplace(list.begin(), list.end());
      }
      it = containing.emplace(commit, std::move(branches)).first;
    }
    if (!it->second) return false;  // commit no longer exists
    if (it->second->contains(target)) return true;
    // Not a local branch head by that name; ask about the ref directly.
    try {
      return repo.is_ancestor(commit, target);
    } catch (const Error&) {
      return false;
    }
  };

  const auto traced_in = [&](const std::string& commit, const std::string& target) {
    auto it = logs.find(target);
    if (it == logs.end()) {
      std::vector<LogEntry> entries;
      try {
        entries = scan_log(repo, target);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BranchNotFound) throw;
      }
      it = logs.emplace(target, std::move(entries)).first;
    }
    for (const LogEntry& entry : it->second) {
      for (const CherryLink& link : extract_cherry_links(entry.hash, entry.message)) {
        if (same_commit(link.origin_commit, commit)) return true;
      }
    }
    return false;
  };

  std::vector<AnnotatedRecommendation> out;
  out.reserve(recs.size());
  for (const Recommendation& r : recs) {
    const bool done = contained_in(r.commit, r.target_branch) ||
                      traced_in(r.commit, r.target_branch);
    out.push_back({r, done ? PickStatus::Done : PickStatus::Pending});
  }
  return out;
}

}  // namespace tartarian
