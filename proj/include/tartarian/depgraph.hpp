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
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tartarian/error.hpp"
#include "tartarian/manifest.hpp"
#include "tartarian/version.hpp"

namespace tartarian {

enum class NodeKind { Branch, Module };

/// A vertex of the dependency graph: either a synthetic release-branch root
/// or a module at one version. Identity is (kind, name, version).
struct Node {
  NodeKind kind = NodeKind::Module;
  std::string name;
  std::optional<Version> version;  // set iff kind == Module

  static Node branch(std::string name) {
    return {NodeKind::Branch, std::move(name), std::nullopt};
  }
  static Node module(std::string name, Version version) {
    return {NodeKind::Module, std::move(name), std::move(version)};
  }

  bool is_branch() const { return kind == NodeKind::Branch; }

  /// "JDK@1.8" for modules, the bare name for branches.
  std::string label() const {
    return version ? name + "@" + version->to_string() : name;
  }

  friend std::weak_ordering operator<=>(const Node& a, const Node& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (a.version.has_value() != b.version.has_value()) {
      return a.version ? std::weak_ordering::greater : std::weak_ordering::less;
    }
    if (!a.version) return std::weak_ordering::equivalent;
    return compare(*a.version, *b.version);
  }
  friend bool operator==(const Node& a, const Node& b) {
    return (a <=> b) == 0;
  }
};

using Edge = std::pair<Node, Node>;
using NodePath = std::vector<Node>;

/// Directed graph of release branches and modules. Immutable once built;
/// every analysis below is a read-only free function.
class DependencyGraph {
 public:
  const std::map<std::string, Node>& roots() const { return roots_; }
  const std::set<Node>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }

  std::size_t module_count() const { return nodes_.size() - roots_.size(); }

  const std::set<Node>& successors(const Node& n) const {
    static const std::set<Node> kNone;
    auto it = adjacency_.find(n);
    return it == adjacency_.end() ? kNone : it->second;
  }

  bool has_branch(const std::string& name) const {
    return roots_.contains(name);
  }

  friend bool operator==(const DependencyGraph& a, const DependencyGraph& b) {
    return a.roots_ == b.roots_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  friend DependencyGraph build(std::span<const BranchManifest> manifests);

  void add_edge(const Node& from, const Node& to) {
    nodes_.insert(from);
    nodes_.insert(to);
    edges_.emplace(from, to);
    adjacency_[from].insert(to);
  }

  std::map<std::string, Node> roots_;
  std::set<Node> nodes_;
  std::set<Edge> edges_;
  std::map<Node, std::set<Node>> adjacency_;
};

/// One root per manifest, an edge from it to every declared dependency,
/// and an edge per declared `requires` pair.
inline DependencyGraph build(std::span<const BranchManifest> manifests) {
  DependencyGraph g;
  for (const BranchManifest& m : manifests) {
    if (g.roots_.contains(m.branch)) {
      throw Error(ErrorCode::DuplicateBranch,
                  "branch '" + m.branch + "' appears in more than one manifest");
    }
    Node root = Node::branch(m.branch);
    g.roots_.emplace(m.branch, root);
    g.nodes_.insert(root);
  }
  for (const BranchManifest& m : manifests) {
    const Node& root = g.roots_.at(m.branch);
    for (const Dependency& d : m.dependencies) {
      g.add_edge(root, Node::module(d.module, d.version));
    }
    for (const auto& [from, to] : m.declared_requires) {
      g.add_edge(Node::module(from.module, from.version),
                 Node::module(to.module, to.version));
    }
  }
  return g;
}

/// For each branch with a direct dependency on `module` satisfying `c`,
/// the version that matched.
inline std::map<std::string, Version> matching_dependencies(
    const DependencyGraph& g, const std::string& module,
    const VersionConstraint& c, std::span<const AliasRule> aliases = {}) {
  std::map<std::string, Version> out;
  for (const auto& [branch, root] : g.roots()) {
    for (const Node& dep : g.successors(root)) {
      if (dep.name == module && satisfies(*dep.version, c, aliases)) {
        out.emplace(branch, *dep.version);
        break;
      }
    }
  }
  return out;
}

inline std::set<std::string> branches_satisfying(
    const DependencyGraph& g, const std::string& module,
    const VersionConstraint& c, std::span<const AliasRule> aliases = {}) {
  std::set<std::string> out;
  for (auto& [branch, version] : matching_dependencies(g, module, c, aliases)) {
    out.insert(branch);
  }
  return out;
}

/// All elementary cycles among module nodes, each starting at its smallest
/// node, sorted.
inline std::vector<NodePath> detect_cycles(const DependencyGraph& g) {
  std::vector<NodePath> cycles;
  NodePath path;
  std::set<Node> on_path;

  // Only nodes greater than `start` may appear after it, so every cycle is
  // found exactly once, from its minimum.
  std::function<void(const Node&, const Node&)> visit =
      [&](const Node& start, const Node& at) {
        for (const Node& next : g.successors(at)) {
          if (next.is_branch()) continue;
          if (next == start) {
            cycles.push_back(path);
          } else if (start < next && !on_path.contains(next)) {
            path.push_back(next);
            on_path.insert(next);
            visit(start, next);
            on_path.erase(next);
            path.pop_back();
          }
        }
      };

  for (const Node& start : g.nodes()) {
    if (start.is_branch()) continue;
    path = {start};
    on_path = {start};
    visit(start, start);
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

enum class ConflictScope { PerRoot, Global };

/// Several versions of one module reachable from the same root (or, in
/// global scope, from any root).
struct Conflict {
  std::string module;
  std::set<Version> versions;
  std::set<std::string> roots;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

namespace detail {

inline std::set<Node> reachable_modules(const DependencyGraph& g, const Node& root) {
  std::set<Node> seen;
  std::vector<Node> stack{root};
  while (!stack.empty()) {
    Node n = std::move(stack.back());
    stack.pop_back();
    for (const Node& next : g.successors(n)) {
      if (!next.is_branch() && seen.insert(next).second) stack.push_back(next);
    }
  }
  return seen;
}

}  // namespace detail

inline std::vector<Conflict> detect_conflicts(
    const DependencyGraph& g, ConflictScope scope = ConflictScope::PerRoot) {
  std::vector<Conflict> conflicts;
  const auto versions_by_module = [](const std::set<Node>& nodes) {
    std::map<std::string, std::set<Version>> out;
    for (const Node& n : nodes) out[n.name].insert(*n.version);
    return out;
  };

  if (scope == ConflictScope::PerRoot) {
    for (const auto& [branch, root] : g.roots()) {
      for (auto& [module, versions] :
           versions_by_module(detail::reachable_modules(g, root))) {
        if (versions.size() < 2) continue;
        auto same = std::find_if(conflicts.begin(), conflicts.end(),
                                 [&](const Conflict& c) {
                                   return c.module == module && c.versions == versions;
                                 });
        if (same != conflicts.end()) {
          same->roots.insert(branch);
        } else {
          conflicts.push_back({module, versions, {branch}});
        }
      }
    }
  } else {
    std::map<std::string, std::set<Version>> versions;
    std::map<std::string, std::set<std::string>> witnesses;
    for (const auto& [branch, root] : g.roots()) {
      for (const Node& n : detail::reachable_modules(g, root)) {
        versions[n.name].insert(*n.version);
        witnesses[n.name].insert(branch);
      }
    }
    for (auto& [module, vs] : versions) {
      if (vs.size() >= 2) conflicts.push_back({module, vs, witnesses[module]});
    }
  }

  std::sort(conflicts.begin(), conflicts.end(),
            [](const Conflict& a, const Conflict& b) {
              if (a.module != b.module) return a.module < b.module;
              return std::lexicographical_compare(a.versions.begin(), a.versions.end(),
                                                  b.versions.begin(), b.versions.end());
            });
  return conflicts;
}

inline constexpr int kDefaultChainThreshold = 3;

/// Maximal simple paths from a root with more than `threshold` edges,
/// longest first.
inline std::vector<NodePath> long_chains(const DependencyGraph& g,
                                         int threshold = kDefaultChainThreshold) {
  std::vector<NodePath> chains;
  NodePath path;
  std::set<Node> on_path;

  std::function<void(const Node&)> extend = [&](const Node& at) {
    bool extended = false;
    for (const Node& next : g.successors(at)) {
      if (on_path.contains(next)) continue;
      extended = true;
      path.push_back(next);
      on_path.insert(next);
      extend(next);
      on_path.erase(next);
      path.pop_back();
    }
    if (!extended && static_cast<long>(path.size()) - 1 > threshold) {
      chains.push_back(path);
    }
  };

  for (const auto& [branch, root] : g.roots()) {
    path = {root};
    on_path = {root};
    extend(root);
  }
  std::stable_sort(chains.begin(), chains.end(),
                   [](const NodePath& a, const NodePath& b) {
                     return a.size() > b.size();
                   });
  return chains;
}

struct HellReport {
  std::vector<NodePath> cycles;
  std::vector<Conflict> conflicts;
  std::vector<NodePath> long_chains;

  bool clean() const {
    return cycles.empty() && conflicts.empty() && long_chains.empty();
  }
};

inline HellReport diagnose(const DependencyGraph& g,
                           int chain_threshold = kDefaultChainThreshold,
                           ConflictScope scope = ConflictScope::PerRoot) {
  return {detect_cycles(g), detect_conflicts(g, scope),
          long_chains(g, chain_threshold)};
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string dot_id(const Node& n) {
  return dot_quote(n.is_branch() ? "branch:" + n.name : n.label());
}

}  // namespace detail

/// Graphviz rendering. Branch roots are drawn as double octagons.
inline std::string to_dot(const DependencyGraph& g) {
  std::ostringstream out;
  out << "digraph dependencies {\n";
  out << "  rankdir=\"LR\"\n";
  out << "  node [fontsize=10, shape=box, height=0.25]\n";
  for (const Node& n : g.nodes()) {
    out << "  " << detail::dot_id(n) << " [label=" << detail::dot_quote(n.label());
    if (n.is_branch()) out << ", shape=doubleoctagon";
    out << "]\n";
  }
  for (const auto& [from, to] : g.edges()) {
    out << "  " << detail::dot_id(from) << " -> " << detail::dot_id(to) << "\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string format_path(const NodePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i != 0) out += " -> ";
    out += path[i].label();
  }
  return out;
}

}  // namespace tartarian
