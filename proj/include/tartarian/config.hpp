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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tartarian/depgraph.hpp"
#include "tartarian/error.hpp"
#include "tartarian/git.hpp"
#include "tartarian/gitio.hpp"
#include "tartarian/manifest.hpp"
#include "tartarian/version.hpp"

namespace tartarian {

struct BranchSpec {
  std::string name;
  std::string manifest_path = "pom.xml";
};

struct ToolConfig {
  std::vector<BranchSpec> branches;
  AliasMap aliases = AliasMap::with_defaults();
  int chain_threshold = kDefaultChainThreshold;
  std::vector<std::string> maintenance_verbs = default_maintenance_verbs();
};

/// Parses .tartarian/config.json:
///   {"branches": [{"name": "9.3.x", "manifest_path": "pom.xml"}],
///    "aliases": {"JDK": {"8": "1.8"}},
///    "chain_threshold": 3,
///    "maintenance_verbs": ["add", "remove"]}
/// Every key is optional. A present "aliases" replaces the JDK default.
inline ToolConfig parse_config(std::string_view content) {
  const auto bad = [](const std::string& why) {
    return Error(ErrorCode::ConfigError, "config: " + why);
  };
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw bad(e.what());
  }
  if (!doc.is_object()) throw bad("expected a JSON object");

  ToolConfig cfg;
  try {
    if (doc.contains("branches")) {
      std::set<std::string> seen;
      for (const auto& b : doc.at("branches")) {
        BranchSpec spec;
        if (b.is_string()) {
          spec.name = b.get<std::string>();
        } else {
          spec.name = b.at("name").get<std::string>();
          if (b.contains("manifest_path")) {
            spec.manifest_path = b.at("manifest_path").get<std::string>();
          }
        }
        if (spec.name.empty()) throw bad("empty branch name");
        if (!seen.insert(spec.name).second) {
          throw bad("branch '" + spec.name + "' listed twice");
        }
        cfg.branches.push_back(std::move(spec));
      }
    }
    if (doc.contains("aliases")) {
      cfg.aliases = AliasMap{};
      for (const auto& [subject, rules] : doc.at("aliases").items()) {
        for (const auto& [from, to] : rules.items()) {
          cfg.aliases.add(subject, parse_version(from),
                          parse_version(to.get<std::string>()));
        }
      }
    }
    if (doc.contains("chain_threshold")) {
      cfg.chain_threshold = doc.at("chain_threshold").get<int>();
      if (cfg.chain_threshold < 1) throw bad("chain_threshold must be >= 1");
    }
    if (doc.contains("maintenance_verbs")) {
      cfg.maintenance_verbs =
          doc.at("maintenance_verbs").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw bad(e.what());
  }
  return cfg;
}

inline std::filesystem::path config_path(const Repository& repo) {
  return repo.root() / ".tartarian" / "config.json";
}

/// The config file if present; otherwise every local branch, read from pom.xml.
inline ToolConfig load_config(const Repository& repo) {
  const std::filesystem::path path = config_path(repo);
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
  }
  ToolConfig cfg;
  for (std::string& b : repo.local_branches()) cfg.branches.push_back({std::move(b)});
  return cfg;
}

/// Loads every configured manifest and builds the global graph. Manifest
/// warnings are appended to `warnings`, prefixed with their branch.
inline DependencyGraph build_graph(const Repository& repo, const ToolConfig& cfg,
                                   std::vector<std::string>* warnings = nullptr) {
  std::vector<BranchManifest> manifests;
  for (const BranchSpec& spec : cfg.branches) {
    try {
      manifests.push_back(load_branch_manifest(repo, spec.name, spec.manifest_path));
    } catch (const SchemaError& e) {
      throw SchemaError(e.field_path(), "branch '" + spec.name + "': " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "branch '" + spec.name + "': " + e.what());
    }
    if (warnings) {
      for (const std::string& w : manifests.back().warnings) {
        warnings->push_back(spec.name + ": " + w);
      }
    }
  }
  return build(manifests);
}

}  // namespace tartarian
