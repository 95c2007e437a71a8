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

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include "json.hpp"

#include "tartarian/error.hpp"
#include "tartarian/git.hpp"
#include "tartarian/version.hpp"

namespace tartarian {

/// One dependency of a release. Maven artifacts are named
/// "groupId:artifactId"; the compiler platform is "JDK".
struct Dependency {
  std::string module;
  Version version;

  friend bool operator==(const Dependency&, const Dependency&) = default;
};

struct BranchManifest {
  std::string branch;
  std::string source;
  std::vector<Dependency> dependencies;
  // (a, b): module a requires module b. Lets a manifest describe library to
  // library edges that the release itself does not declare.
  std::vector<std::pair<Dependency, Dependency>> declared_requires;
  std::vector<std::string> warnings;

  friend bool operator==(const BranchManifest& a, const BranchManifest& b) {
    return a.branch == b.branch && a.source == b.source &&
           a.dependencies == b.dependencies &&
           a.declared_requires == b.declared_requires;
  }
};

/// Raised for generic manifests that do not match the expected shape.
class SchemaError : public Error {
 public:
  SchemaError(std::string field_path, const std::string& why)
      : Error(ErrorCode::SchemaViolation,
              "schema violation at '" + field_path + "': " + why),
        field_path_(std::move(field_path)) {}

  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

struct PomDependencies {
  std::vector<Dependency> dependencies;
  std::vector<std::string> warnings;
};

namespace detail {

using boost::property_tree::ptree;

// One `${name}` pass against <properties>. nullopt when a referenced
// property is missing.
inline std::optional<std::string> interpolate(
    const std::string& raw, const std::map<std::string, std::string>& props) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = raw.find("${", pos);
    if (open == std::string::npos) break;
    const std::size_t close = raw.find('}', open + 2);
    if (close == std::string::npos) return std::nullopt;
    out.append(raw, pos, open - pos);
    const std::string name = raw.substr(open + 2, close - open - 2);
    auto it = props.find(name);
    if (it == props.end()) return std::nullopt;
    if (it->second.find("${") != std::string::npos) {
      throw Error(ErrorCode::NestedInterpolation,
                  "property '" + name + "' refers to another property ('" +
                      it->second + "'); only one level of ${...} is resolved");
    }
    out += it->second;
    pos = close + 1;
  }
  out.append(raw, pos, std::string::npos);
  return out;
}

inline std::string child_text(const ptree& node, const std::string& key) {
  // Maven property names contain dots; use '/' as the path separator.
  if (auto child = node.get_child_optional(ptree::path_type(key, '/'))) {
    return std::string(trim(child->get_value<std::string>()));
  }
  return {};
}

inline void add_unique(std::vector<Dependency>& deps, Dependency dep) {
  for (const Dependency& existing : deps) {
    if (existing.module != dep.module) continue;
    if (existing.version == dep.version) return;
    throw Error(ErrorCode::DuplicateModule,
                "module '" + dep.module + "' declared twice with versions " +
                    existing.version.to_string() + " and " +
                    dep.version.to_string());
  }
  deps.push_back(std::move(dep));
}

}  // namespace detail

/// Reads the pom.xml subset we care about: <dependencies>/<dependency>
/// coordinates, plus the JDK level from maven.compiler.source (or target).
/// Entries are returned in document order.
inline PomDependencies parse_pom(std::string_view content) {
  using detail::ptree;
  ptree tree;
  try {
    std::istringstream in{std::string(content)};
    boost::property_tree::read_xml(
        in, tree, boost::property_tree::xml_parser::trim_whitespace);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw Error(ErrorCode::MalformedXml, std::string("malformed pom.xml: ") + e.what());
  }
  const auto project = tree.get_child_optional("project");
  if (!project) throw Error(ErrorCode::MalformedXml, "pom.xml has no <project> root");

  std::map<std::string, std::string> props;
  if (auto p = project->get_child_optional("properties")) {
    for (const auto& [key, node] : *p) {
      if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
      props[key] = std::string(detail::trim(node.get_value<std::string>()));
    }
  }

  PomDependencies result;
  const auto resolve = [&](const std::string& what,
                           const std::string& raw) -> std::optional<Version> {
    std::optional<std::string> text = detail::interpolate(raw, props);
    if (!text) {
      result.warnings.push_back("skipping " + what + ": cannot resolve version '" +
                                raw + "'");
      return std::nullopt;
    }
    try {
      return parse_version(*text);
    } catch (const Error& e) {
      result.warnings.push_back("skipping " + what + ": " + e.what());
      return std::nullopt;
    }
  };

  for (const auto& [key, node] : *project) {
    if (key == "properties") {
      std::string jdk = detail::child_text(node, "maven.compiler.source");
      if (jdk.empty()) jdk = detail::child_text(node, "maven.compiler.target");
      if (!jdk.empty()) {
        if (auto v = resolve("JDK", jdk)) {
          detail::add_unique(result.dependencies, {"JDK", std::move(*v)});
        }
      }
    } else if (key == "dependencies") {
      for (const auto& [dkey, dep] : node) {
        if (dkey != "dependency") continue;
        const std::string module = detail::child_text(dep, "groupId") + ":" +
                                   detail::child_text(dep, "artifactId");
        const std::string raw = detail::child_text(dep, "version");
        if (raw.empty()) {
          result.warnings.push_back("skipping " + module + ": no <version>");
          continue;
        }
        if (auto v = resolve(module, raw)) {
          detail::add_unique(result.dependencies, {module, std::move(*v)});
        }
      }
    }
  }
  return result;
}

namespace detail {

inline Dependency parse_require_end(const nlohmann::json& value,
                                    const std::string& path,
                                    const std::vector<Dependency>& deps) {
  if (!value.is_string() || value.get<std::string>().empty()) {
    throw SchemaError(path, "expected \"module\" or \"module@version\"");
  }
  const std::string text = value.get<std::string>();
  const std::size_t at = text.rfind('@');
  if (at == std::string::npos) {
    for (const Dependency& d : deps) {
      if (d.module == text) return d;
    }
    throw SchemaError(path, "module '" + text +
                                "' has no version here; write it as module@version");
  }
  if (at == 0) throw SchemaError(path, "empty module name");
  try {
    return {text.substr(0, at), parse_version(text.substr(at + 1))};
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace detail

/// Generic JSON manifest:
///   {"branch": "9.3.x",
///    "dependencies": [{"module": "JDK", "version": "1.8"}],
///    "requires": [["X@1.0", "Z@2.0"], ...]}          // optional
inline BranchManifest parse_generic(std::string_view content) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("malformed manifest: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected an object");

  BranchManifest m;
  if (!doc.contains("branch")) throw SchemaError("branch", "missing");
  if (!doc["branch"].is_string() || doc["branch"].get<std::string>().empty()) {
    throw SchemaError("branch", "expected a nonempty string");
  }
  m.branch = doc["branch"].get<std::string>();

  if (!doc.contains("dependencies")) throw SchemaError("dependencies", "missing");
  const auto& deps = doc["dependencies"];
  if (!deps.is_array()) throw SchemaError("dependencies", "expected an array");
  for (std::size_t i = 0; i < deps.size(); ++i) {
    const std::string path = "dependencies[" + std::to_string(i) + "]";
    const auto& d = deps[i];
    if (!d.is_object()) throw SchemaError(path, "expected an object");
    for (const char* key : {"module", "version"}) {
      if (!d.contains(key)) throw SchemaError(path + "." + key, "missing");
      if (!d[key].is_string() || d[key].get<std::string>().empty()) {
        throw SchemaError(path + "." + key, "expected a nonempty string");
      }
    }
    try {
      detail::add_unique(m.dependencies, {d["module"].get<std::string>(),
                                          parse_version(d["version"].get<std::string>())});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DuplicateModule) throw;
      throw SchemaError(path + ".version", e.what());
    }
  }

  if (doc.contains("requires")) {
    const auto& req = doc["requires"];
    if (!req.is_array()) throw SchemaError("requires", "expected an array");
    for (std::size_t i = 0; i < req.size(); ++i) {
      const std::string path = "requires[" + std::to_string(i) + "]";
      if (!req[i].is_array() || req[i].size() != 2) {
        throw SchemaError(path, "expected a [from, to] pair");
      }
      m.declared_requires.emplace_back(
          detail::parse_require_end(req[i][0], path + "[0]", m.dependencies),
          detail::parse_require_end(req[i][1], path + "[1]", m.dependencies));
    }
  }
  return m;
}

inline std::string serialize_generic(const BranchManifest& m) {
  nlohmann::ordered_json doc;
  doc["branch"] = m.branch;
  doc["dependencies"] = nlohmann::ordered_json::array();
  for (const Dependency& d : m.dependencies) {
    doc["dependencies"].push_back(
        {{"module", d.module}, {"version", d.version.to_string()}});
  }
  if (!m.declared_requires.empty()) {
    auto& req = doc["requires"] = nlohmann::ordered_json::array();
    for (const auto& [from, to] : m.declared_requires) {
      req.push_back({from.module + "@" + from.version.to_string(),
                     to.module + "@" + to.version.to_string()});
    }
  }
  return doc.dump(2) + "\n";
}

/// Reads `path` from the tip of `branch` (no checkout) and parses it by
/// extension: .xml as a pom, .json as a generic manifest.
inline BranchManifest load_branch_manifest(const Repository& repo,
                                           const std::string& branch,
                                           const std::string& path) {
  const std::string content = repo.show(branch, path);
  const auto ends_with = [&](std::string_view ext) {
    return path.size() >= ext.size() &&
           detail::to_lower(path.substr(path.size() - ext.size())) == ext;
  };
  BranchManifest m;
  if (ends_with(".xml")) {
    PomDependencies pom = parse_pom(content);
    m.dependencies = std::move(pom.dependencies);
    m.warnings = std::move(pom.warnings);
  } else if (ends_with(".json")) {
    m = parse_generic(content);
    if (m.branch != branch) {
      m.warnings.push_back("manifest names branch '" + m.branch +
                           "'; using git branch '" + branch + "'");
    }
  } else {
    throw Error(ErrorCode::ConfigError,
                "unsupported manifest type '" + path + "' (expected .xml or .json)");
  }
  m.branch = branch;
  m.source = path;
  return m;
}

}  // namespace tartarian
