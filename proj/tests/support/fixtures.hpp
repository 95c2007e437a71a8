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

// Test-only helpers: scratch directories and the fixture repository
// scripts under tests/fixtures/. Shell access here goes through popen so
// fixture setup never depends on the library's own git wrapper.

#pragma once

#include <stdio.h>
#include <stdlib.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef TARTARIAN_FIXTURE_DIR
#error "TARTARIAN_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace tartarian::testing {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "tartarian-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct ShellResult {
  int exit_code = 0;
  std::string output;
};

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

/// Runs `command` with /bin/sh in `dir`, capturing stdout (stderr is
/// folded in when `merge_stderr`).
inline ShellResult shell(const std::filesystem::path& dir, const std::string& command,
                         bool merge_stderr = true) {
  const std::string full = "cd " + quote(dir.string()) + " && { " + command + " ; }" +
                           (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = ::popen(full.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  ShellResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

/// Like shell(), but throws when the command fails.
inline std::string sh(const std::filesystem::path& dir, const std::string& command) {
  ShellResult r = shell(dir, command);
  if (r.exit_code != 0) {
    throw std::runtime_error("command failed (" + std::to_string(r.exit_code) +
                             "): " + command + "\n" + r.output);
  }
  return r.output;
}

inline std::string trim_newline(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

/// A fixture repository built by tests/fixtures/<name>.sh in a fresh
/// scratch directory. The repository lives at path()/repo.
class FixtureRepo {
 public:
  explicit FixtureRepo(const std::string& name) {
    std::filesystem::create_directories(home());
    sh(tmp_.path(), "FIXTURE_HOME=" + quote(home().string()) + " bash " +
                        quote(std::string(TARTARIAN_FIXTURE_DIR) + "/" + name + ".sh") +
                        " " + quote(path().string()));
  }

  std::filesystem::path path() const { return tmp_.path() / "repo"; }
  std::filesystem::path home() const { return tmp_.path() / "home"; }

  std::string git(const std::string& args) const {
    return trim_newline(sh(path(), "git " + args));
  }

  void write(const std::string& file, const std::string& content) const {
    std::filesystem::create_directories((path() / file).parent_path());
    std::ofstream(path() / file, std::ios::binary) << content;
  }

  void stage(const std::string& file, const std::string& content) const {
    write(file, content);
    git("add " + quote(file));
  }

 private:
  TempDir tmp_;
};

/// An empty repository with an identity configured and no commits.
class EmptyRepo {
 public:
  EmptyRepo() {
    sh(tmp_.path(), "git init -q -b main . && git config user.name t && "
                    "git config user.email t@example.org");
  }
  std::filesystem::path path() const { return tmp_.path(); }

 private:
  TempDir tmp_;
};

}  // namespace tartarian::testing
