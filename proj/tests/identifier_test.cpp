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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "tartarian/identifier.hpp"

namespace tartarian {
namespace {

Version V(const std::string& s) { return parse_version(s); }

BranchManifest manifest(const std::string& branch,
                        const std::vector<std::pair<std::string, std::string>>& deps) {
  BranchManifest m;
  m.branch = branch;
  for (const auto& [module, version] : deps) m.dependencies.push_back({module, V(version)});
  return m;
}

DependencyGraph release_lines() {
  return build(std::vector<BranchManifest>{manifest("9.2.x", {{"JDK", "1.7"}}),
                                           manifest("9.3.x", {{"JDK", "1.8"}}),
                                           manifest("9.4.x", {{"JDK", "1.8"}})});
}

std::vector<std::pair<std::string, Priority>> targets(const std::vector<Recommendation>& recs) {
  std::vector<std::pair<std::string, Priority>> out;
  for (const Recommendation& r : recs) out.emplace_back(r.target_branch, r.priority);
  return out;
}

TEST(Identify, ThreeReleaseLines) {
  const auto c = TaggedCommit::from_message(
      "0123abcd", "Fix async write loss #bugfix{JDK,1.8+}", "9.4.x");
  const auto recs = identify(c, release_lines(), AliasMap::with_defaults());
  EXPECT_EQ(targets(recs), (std::vector<std::pair<std::string, Priority>>{
                               {"9.3.x", Priority::High}}));
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].commit, "0123abcd");
  EXPECT_EQ(recs[0].matched.kind, TagKind::BugFix);
  EXPECT_FALSE(recs[0].rationale.empty());
}

TEST(Identify, NoTags) {
  const auto c = TaggedCommit::from_message("0123abcd", "plain message", "9.4.x");
  EXPECT_TRUE(identify(c, release_lines(), AliasMap::with_defaults()).empty());
}

TEST(Identify, BackportByBranchName) {
  const auto g = build(std::vector<BranchManifest>{manifest("jetty-9.2.x", {{"JDK", "1.7"}}),
                                                   manifest("jetty-9.3.x", {{"JDK", "1.8"}}),
                                                   manifest("jetty-9.4.x", {{"JDK", "1.8"}})});
  const auto c = TaggedCommit::from_message(
      "abcdef12", "Backport permessage-deflate #backport{Jetty, 9.2.x}", "jetty-9.3.x");
  EXPECT_EQ(targets(identify(c, g, AliasMap::with_defaults())),
            (std::vector<std::pair<std::string, Priority>>{
                {"jetty-9.2.x", Priority::Medium}}));
}

TEST(Identify, AnyJdk) {
  const auto c =
      TaggedCommit::from_message("0123abcd", "#bugfix{JDK, +}", "9.4.x");
  EXPECT_EQ(targets(identify(c, release_lines(), AliasMap::with_defaults())),
            (std::vector<std::pair<std::string, Priority>>{{"9.2.x", Priority::High},
                                                           {"9.3.x", Priority::High}}));
}

TEST(Identify, JdkAliases) {
  const auto c = TaggedCommit::from_message("0123abcd", "#config{JDK, 8+}", "9.2.x");
  EXPECT_EQ(targets(identify(c, release_lines(), AliasMap::with_defaults())),
            (std::vector<std::pair<std::string, Priority>>{{"9.3.x", Priority::High},
                                                           {"9.4.x", Priority::High}}));
  EXPECT_TRUE(identify(c, release_lines(), AliasMap{}).empty());
}

TEST(Identify, HighestPriorityTagWins) {
  const auto c = TaggedCommit::from_message(
      "0123abcd", "#deprecated{JDK, 1.7} #improve{JDK, +} #inaccessible{JDK, 1.7}", "9.4.x");
  const auto recs = identify(c, release_lines(), AliasMap::with_defaults());
  EXPECT_EQ(targets(recs), (std::vector<std::pair<std::string, Priority>>{
                               {"9.2.x", Priority::High}, {"9.3.x", Priority::Low}}));
  EXPECT_EQ(recs[0].matched.kind, TagKind::Inaccessible);
  // Equal priority: the earlier tag is kept.
  EXPECT_EQ(recs[1].matched.kind, TagKind::Improve);
}

TEST(Identify, UnknownSourceBranch) {
  const auto c = TaggedCommit::from_message("0123abcd", "#bugfix{JDK,+}", "9.9.x");
  try {
    identify(c, release_lines(), AliasMap::with_defaults());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSourceBranch);
  }
}

TEST(BranchMatchesSeries, Examples) {
  EXPECT_TRUE(branch_matches_series("jetty-9.2.x", Series{V("9.2")}));
  EXPECT_FALSE(branch_matches_series("release1.1", Series{V("9.2")}));
  EXPECT_TRUE(branch_matches_series("release1.2", Series{V("1.2")}));
  EXPECT_TRUE(branch_matches_series("9.2.x", Series{V("9")}));
  EXPECT_FALSE(branch_matches_series("master", Series{V("9")}));
  EXPECT_FALSE(branch_matches_series("jetty-9.20.x", Series{V("9.2")}));
  EXPECT_EQ(branch_version("jetty-9.2.x")->to_string(), "9.2");
  EXPECT_EQ(branch_version("v2-release1.12")->to_string(), "1.12");
  EXPECT_FALSE(branch_version("main").has_value());
}

struct Scenario {
  std::vector<BranchManifest> manifests;
  TaggedCommit commit;
};

Scenario random_scenario(std::mt19937& rng) {
  const auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  static const std::vector<std::string> kModules = {"JDK", "org.x:lib", "org.y:api"};
  static const std::vector<std::string> kVersions = {"1.6", "1.7", "1.8", "2.0", "2.0.1",
                                                     "3.1-rc1", "8", "9"};
  static const std::vector<std::string> kConstraints = {"+", "1.7+", "1.8", "2.x", "8+",
                                                        "1.x", "3.1-rc1", "9.3.x"};
  Scenario s;
  const int branches = 1 + pick(6);
  for (int b = 0; b < branches; ++b) {
    std::vector<std::pair<std::string, std::string>> deps;
    for (const std::string& m : kModules) {
      if (pick(3) != 0) deps.push_back({m, kVersions[pick(kVersions.size())]});
    }
    s.manifests.push_back(manifest("rel-9." + std::to_string(b) + ".x", deps));
  }
  std::string message = "change";
  for (int t = pick(4); t > 0; --t) {
    const TagKind kind = kAllTagKinds[pick(kAllTagKinds.size())];
    const std::string subject = kind == TagKind::Backport ? "Jetty" : kModules[pick(3)];
    message += " #" + std::string(tag_name(kind)) + "{" + subject + ", " +
               kConstraints[pick(kConstraints.size())] + "}";
  }
  s.commit = TaggedCommit::from_message(
      "feedbeef", message, s.manifests[pick(s.manifests.size())].branch);
  return s;
}

TEST(IdentifyProperty, Invariants) {
  std::mt19937 rng(17);
  const AliasMap aliases = AliasMap::with_defaults();
  for (int round = 0; round < 1500; ++round) {
    const Scenario s = random_scenario(rng);
    const auto g = build(s.manifests);
    const auto recs = identify(s.commit, g, aliases);
    ASSERT_EQ(recs, identify(s.commit, g, aliases));

    std::set<std::string> seen;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const Recommendation& r = recs[i];
      ASSERT_NE(r.target_branch, s.commit.source_branch);
      ASSERT_TRUE(seen.insert(r.target_branch).second);
      ASSERT_EQ(r.priority, priority_of(r.matched.kind));
      if (i > 0) {
        const Recommendation& p = recs[i - 1];
        ASSERT_TRUE(p.priority > r.priority ||
                    (p.priority == r.priority && p.target_branch < r.target_branch));
      }
      if (r.matched.kind == TagKind::Backport) {
        ASSERT_TRUE(branch_matches(r.target_branch, r.matched.constraint));
      } else {
        bool sound = false;
        for (const Node& dep : g.successors(Node::branch(r.target_branch))) {
          sound = sound || (dep.name == r.matched.subject &&
                            satisfies(*dep.version, r.matched.constraint,
                                      aliases.rules_for(dep.name)));
        }
        ASSERT_TRUE(sound) << r.target_branch << " " << render(r.matched);
      }
      // No tag of strictly higher priority also selects this branch.
      for (const Hashtag& t : s.commit.tags) {
        if (priority_of(t.kind) <= r.priority) continue;
        const bool selects =
            t.kind == TagKind::Backport
                ? branch_matches(r.target_branch, t.constraint)
                : branches_satisfying(g, t.subject, t.constraint, aliases.rules_for(t.subject))
                      .contains(r.target_branch);
        ASSERT_FALSE(selects);
      }
    }

    // Adding a branch keeps every earlier recommendation, in the same order.
    auto grown = s.manifests;
    grown.push_back(manifest("rel-9.8.x", {{"JDK", "1.8"}, {"org.x:lib", "2.0"}}));
    std::vector<Recommendation> filtered;
    for (const Recommendation& r : identify(s.commit, build(grown), aliases)) {
      if (r.target_branch != "rel-9.8.x") filtered.push_back(r);
    }
    ASSERT_EQ(filtered, recs);
  }
}

class AnnotateStatus : public ::testing::Test {
 protected:
  Recommendation rec(const std::string& commit, const std::string& target) {
    return {commit, target, Priority::High, parse_message("#bugfix{JDK,+}").hashtags[0], ""};
  }
  std::vector<PickStatus> statuses(const std::vector<Recommendation>& recs) {
    std::vector<PickStatus> out;
    for (const auto& a : annotate_status(recs, repo)) out.push_back(a.status);
    return out;
  }

  testing::FixtureRepo fixture{"dag"};
  Repository repo{fixture.path()};
};

TEST_F(AnnotateStatus, CherryTracesAndContainment) {
  const std::string f = fixture.git("rev-parse master");
  EXPECT_EQ(statuses({rec(f, "release1.1"), rec(f, "release1.2"), rec(f, "release1.3")}),
            (std::vector<PickStatus>{PickStatus::Done, PickStatus::Done, PickStatus::Done}));
  const std::string c = fixture.git("rev-parse release1.2~1");
  EXPECT_EQ(statuses({rec(c, "release1.1"), rec(c, "release1.3")}),
            (std::vector<PickStatus>{PickStatus::Pending, PickStatus::Done}));
}

TEST_F(AnnotateStatus, FreshCommitIsPending) {
  fixture.stage("g", "g\n");
  fixture.git("commit -q -m 'Added g'");
  const std::string g = fixture.git("rev-parse HEAD");
  EXPECT_EQ(statuses({rec(g, "release1.1"), rec(g, "release1.2"), rec(g, "release1.3")}),
            (std::vector<PickStatus>(3, PickStatus::Pending)));
  EXPECT_EQ(statuses({rec("deadbeefdeadbeef", "release1.1")}),
            (std::vector<PickStatus>{PickStatus::Pending}));
}

TEST_F(AnnotateStatus, MergedWithoutTraceIsDone) {
  fixture.git("checkout -q -b hotfix release1.1");
  fixture.stage("h", "h\n");
  fixture.git("commit -q -m 'Added h'");
  const std::string h = fixture.git("rev-parse HEAD");
  fixture.git("checkout -q release1.1");
  fixture.git("merge -q --ff-only hotfix");
  EXPECT_TRUE(repo.is_ancestor(h, "release1.1"));
  EXPECT_FALSE(repo.is_ancestor(h, "release1.2"));
  EXPECT_EQ(statuses({rec(h, "release1.1"), rec(h, "release1.2")}),
            (std::vector<PickStatus>{PickStatus::Done, PickStatus::Pending}));
}

TEST_F(AnnotateStatus, MissingGit) {
  Repository broken(fixture.path(), "/nonexistent/git");
  const std::vector<Recommendation> recs = {rec(fixture.git("rev-parse master"), "release1.1")};
  try {
    annotate_status(recs, broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GitUnavailable);
  }
}

}  // namespace
}  // namespace tartarian
