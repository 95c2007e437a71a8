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

#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "tartarian/error.hpp"
#include "tartarian/git.hpp"
#include "tartarian/version.hpp"

namespace tartarian {

enum class TraceForm {
  Parenthesized,  // git's -x line: "(cherry picked from commit <id>)"
  Bare,           // "cherry picked from <id>"
};

struct CherryLink {
  std::string cherry_commit;
  std::string origin_commit;
  TraceForm form = TraceForm::Parenthesized;

  friend bool operator==(const CherryLink&, const CherryLink&) = default;
};

/// True when one id abbreviates the other.
inline bool same_commit(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) return false;
  return a.size() <= b.size() ? b.starts_with(a) : a.starts_with(b);
}

inline std::vector<CherryLink> extract_cherry_links(std::string_view commit,
                                                    std::string_view message) {
  static const std::regex kTrace(
      R"(cherry\s+picked\s+from\s+(commit\s+)?([0-9a-f]{7,40})(?![0-9a-z_]))",
      std::regex::ECMAScript | std::regex::icase);
  std::vector<CherryLink> links;
  const std::string text(message);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kTrace);
       it != std::sregex_iterator(); ++it) {
    std::string origin = detail::to_lower((*it)[2].str());
    if (same_commit(origin, commit)) continue;
    links.push_back({std::string(commit), std::move(origin),
                     (*it)[1].matched ? TraceForm::Parenthesized : TraceForm::Bare});
  }
  return links;
}

struct LogEntry {
  std::string hash;
  std::string message;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

/// Full history of `branch`, newest first. Each message is git's raw body
/// (%B) byte for byte.
inline std::vector<LogEntry> scan_log(const Repository& repo,
                                      const std::string& branch) {
  const std::vector<std::string> args = {"log", branch, "--format=%H%x00%B%x1e"};
  CommandResult r = repo.run(args);
  if (!r.ok()) {
    if (!repo.has_commits()) {
      throw Error(ErrorCode::GitFailure, "repository at " + repo.root().string() +
                                             " has no commits");
    }
    if (r.err.find("unknown revision") != std::string::npos ||
        r.err.find("bad revision") != std::string::npos) {
      throw Error(ErrorCode::BranchNotFound, "branch '" + branch + "' not found");
    }
    throw Repository::failure(args, r);
  }

  // Records look like "<hash>\0<body>\x1e\n"; the body may hold anything
  // except the two separators.
  std::vector<LogEntry> entries;
  std::string_view rest = r.out;
  while (true) {
    while (!rest.empty() && rest.front() == '\n') rest.remove_prefix(1);
    if (rest.empty()) break;
    const std::size_t end = rest.find('\x1e');
    const std::string_view record = rest.substr(0, end);
    const std::size_t nul = record.find('\0');
    if (nul == std::string_view::npos) {
      throw Error(ErrorCode::GitFailure, "unexpected git log output");
    }
    entries.push_back({std::string(record.substr(0, nul)),
                       std::string(record.substr(nul + 1))});
    if (end == std::string_view::npos) break;
    rest.remove_prefix(end + 1);
  }
  return entries;
}

}  // namespace tartarian
