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
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tartarian/error.hpp"

extern char** environ;

namespace tartarian {

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;

  bool ok() const { return exit_code == 0; }
};

namespace detail {

class Pipe {
 public:
  Pipe() {
    if (::pipe2(fds_, O_CLOEXEC) != 0) {
      throw Error(ErrorCode::GitFailure,
                  std::string("pipe2: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_end() const { return fds_[0]; }
  int write_end() const { return fds_[1]; }
  void close_read() { close_fd(fds_[0]); }
  void close_write() { close_fd(fds_[1]); }

 private:
  static void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
  int fds_[2] = {-1, -1};
};

// Runs argv[0] from PATH in `cwd`, capturing both output streams. The child
// gets LC_ALL=C so diagnostics on stderr are stable enough to inspect.
inline CommandResult spawn(const std::vector<std::string>& argv,
                           const std::filesystem::path& cwd) {
  std::vector<std::string> env_storage;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view entry(*e);
    if (entry.starts_with("LC_ALL=") || entry.starts_with("LANGUAGE=") ||
        entry.starts_with("GIT_TERMINAL_PROMPT=")) {
      continue;
    }
    env_storage.emplace_back(entry);
  }
  env_storage.emplace_back("LC_ALL=C");
  env_storage.emplace_back("GIT_TERMINAL_PROMPT=0");
  std::vector<char*> envp;
  for (auto& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);

  std::vector<std::string> args = argv;
  std::vector<char*> c_argv;
  for (auto& a : args) c_argv.push_back(a.data());
  c_argv.push_back(nullptr);
  const std::string dir = cwd.string();

  Pipe out_pipe, err_pipe, exec_pipe;
  const pid_t pid = ::fork();
  if (pid < 0) {
    throw Error(ErrorCode::GitFailure,
                std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::dup2(out_pipe.write_end(), STDOUT_FILENO);
    ::dup2(err_pipe.write_end(), STDERR_FILENO);
    int err = 0;
    if (!dir.empty() && ::chdir(dir.c_str()) != 0) {
      err = errno;
    } else {
      ::execvpe(c_argv[0], c_argv.data(), envp.data());
      err = errno;
    }
    [[maybe_unused]] auto n = ::write(exec_pipe.write_end(), &err, sizeof err);
    ::_exit(127);
  }

  out_pipe.close_write();
  err_pipe.close_write();
  exec_pipe.close_write();

  CommandResult result;
  pollfd fds[2] = {{out_pipe.read_end(), POLLIN, 0},
                   {err_pipe.read_end(), POLLIN, 0}};
  std::string* sinks[2] = {&result.out, &result.err};
  int open_count = 2;
  char buffer[65536];
  while (open_count > 0) {
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || fds[i].revents == 0) continue;
      const ssize_t n = ::read(fds[i].fd, buffer, sizeof buffer);
      if (n > 0) {
        sinks[i]->append(buffer, static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        fds[i].fd = -1;
        --open_count;
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  int child_errno = 0;
  if (::read(exec_pipe.read_end(), &child_errno, sizeof child_errno) ==
      static_cast<ssize_t>(sizeof child_errno)) {
    throw Error(ErrorCode::GitUnavailable,
                "cannot run '" + argv.front() + "' in " + dir + ": " +
                    std::strerror(child_errno));
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status)
                                       : 128 + WTERMSIG(status);
  return result;
}

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace detail

/// Handle on a working tree. All access goes through the `git` executable;
/// calls on one handle are serialized.
class Repository {
 public:
  explicit Repository(std::filesystem::path root, std::string git = "git")
      : root_(std::move(root)), git_(std::move(git)) {}

  Repository(const Repository&) = delete;
  Repository& operator=(const Repository&) = delete;

  const std::filesystem::path& root() const { return root_; }

  CommandResult run(const std::vector<std::string>& args) const {
    std::vector<std::string> argv;
    argv.reserve(args.size() + 1);
    argv.push_back(git_);
    argv.insert(argv.end(), args.begin(), args.end());
    std::lock_guard lock(mutex_);
    return detail::spawn(argv, root_);
  }

  CommandResult run_checked(const std::vector<std::string>& args) const {
    CommandResult r = run(args);
    if (!r.ok()) throw failure(args, r);
    return r;
  }

  static Error failure(const std::vector<std::string>& args,
                       const CommandResult& r) {
    std::string cmd = "git";
    for (const auto& a : args) cmd += " " + a;
    return Error(ErrorCode::GitFailure, "'" + cmd + "' exited with " +
                                            std::to_string(r.exit_code) +
                                            ": " + trimmed(r.err));
  }

  /// `git rev-parse --abbrev-ref HEAD`, falling back to the symbolic ref
  /// on an unborn branch.
  std::string current_branch() const {
    CommandResult r = run({"rev-parse", "--abbrev-ref", "HEAD"});
    if (!r.ok()) {
      r = run({"symbolic-ref", "--short", "HEAD"});
      if (!r.ok()) throw failure({"rev-parse", "--abbrev-ref", "HEAD"}, r);
    }
    std::string branch = trimmed(r.out);
    if (branch == "HEAD") {
      throw Error(ErrorCode::GitFailure,
                  "HEAD is detached; check out a branch first");
    }
    return branch;
  }

  std::string resolve(const std::string& rev) const {
    return trimmed(run_checked({"rev-parse", "--verify", rev}).out);
  }

  bool has_commits() const {
    return run({"rev-parse", "--verify", "--quiet", "HEAD"}).ok();
  }

  /// Blob content at `branch:path` without touching the working tree.
  std::string show(const std::string& branch, const std::string& path) const {
    const std::vector<std::string> args = {"show", branch + ":" + path};
    CommandResult r = run(args);
    if (r.ok()) return std::move(r.out);
    if (r.err.find("invalid object name") != std::string::npos ||
        r.err.find("unknown revision") != std::string::npos) {
      throw Error(ErrorCode::BranchNotFound, "branch '" + branch + "' not found");
    }
    if (r.err.find("does not exist in") != std::string::npos ||
        r.err.find("exists on disk, but not in") != std::string::npos) {
      throw Error(ErrorCode::PathNotFound,
                  "path '" + path + "' not found on branch '" + branch + "'");
    }
    throw failure(args, r);
  }

  /// Local branches whose history contains `commit`.
  std::vector<std::string> branches_containing(const std::string& commit) const {
    CommandResult r = run_checked({"branch", "--contains", commit});
    std::vector<std::string> branches;
    for (std::string line : detail::split_lines(r.out)) {
      // "* current", "+ checked out in another worktree", "  other"
      if (line.size() >= 2 && (line[0] == '*' || line[0] == '+' || line[0] == ' ')) {
        line.erase(0, 2);
      }
      line = trimmed(line);
      if (line.empty() || line.starts_with("(")) continue;
      branches.push_back(std::move(line));
    }
    return branches;
  }

  bool is_ancestor(const std::string& ancestor, const std::string& rev) const {
    const std::vector<std::string> args = {"merge-base", "--is-ancestor",
                                           ancestor, rev};
    CommandResult r = run(args);
    if (r.exit_code == 0) return true;
    if (r.exit_code == 1) return false;
    throw failure(args, r);
  }

  std::vector<std::string> local_branches() const {
    CommandResult r =
        run_checked({"for-each-ref", "--format=%(refname:short)", "refs/heads"});
    std::vector<std::string> out;
    for (auto& line : detail::split_lines(r.out)) {
      if (!line.empty()) out.push_back(std::move(line));
    }
    return out;
  }

  static std::string trimmed(std::string_view s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' ||
                          s.back() == ' ' || s.back() == '\t')) {
      s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
      s.remove_prefix(1);
    }
    return std::string(s);
  }

 private:
  std::filesystem::path root_;
  std::string git_;
  mutable std::mutex mutex_;
};

}  // namespace tartarian
