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

// Random generators for hashtag property tests.

#pragma once

#include <random>
#include <string>

#include "tartarian/hashtag.hpp"

namespace tartarian::testing {

class HashtagGenerator {
 public:
  explicit HashtagGenerator(unsigned seed) : rng_(seed) {}

  Hashtag next() {
    Hashtag t;
    t.kind = kAllTagKinds[pick(0, kAllTagKinds.size() - 1)];
    t.subject = subject();
    switch (pick(0, 3)) {
      case 0: t.constraint = AnyVersion{}; break;
      case 1: t.constraint = AtLeast{version(true)}; break;
      case 2: t.constraint = Series{version(false)}; break;
      default: t.constraint = Exact{version(true)}; break;
    }
    return t;
  }

  Version version(bool allow_qualifier) {
    Version v;
    const std::size_t n = pick(1, 4);
    for (std::size_t i = 0; i < n; ++i) v.segments.push_back(pick(0, 20));
    static const char* kQualifiers[] = {"alpha1", "beta", "rc2", "release", "m3", "b.2"};
    if (allow_qualifier && pick(0, 3) == 0) v.qualifier = kQualifiers[pick(0, 5)];
    return v;
  }

  std::string subject() {
    static const std::string kFirst =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    static const std::string kRest = kFirst + ".:-_ /";
    std::string s(1, kFirst[pick(0, kFirst.size() - 1)]);
    const std::size_t n = pick(0, 12);
    for (std::size_t i = 0; i < n; ++i) s += kRest[pick(0, kRest.size() - 1)];
    while (s.back() == ' ') s.pop_back();
    return s;
  }

  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

 private:
  std::mt19937 rng_;
};

/// Arbitrary byte strings biased toward tag punctuation and tag names.
class MessageFuzzer {
 public:
  explicit MessageFuzzer(unsigned seed) : gen_(seed), rng_(seed + 1) {}

  std::string next() {
    std::string out;
    const std::size_t pieces = pick(0, 12);
    for (std::size_t i = 0; i < pieces; ++i) {
      switch (pick(0, 6)) {
        case 0: out += render(gen_.next()); break;
        case 1: out += "#"; out += tag_name(kAllTagKinds[pick(0, 6)]); break;
        case 2: out += "{"; break;
        case 3: out += std::string(1, "{},#\n +x."[pick(0, 9)]); break;
        case 4: out += gen_.subject(); break;
        case 5: out += gen_.version(true).to_string(); break;
        default:
          for (std::size_t k = pick(1, 8); k > 0; --k) {
            out += static_cast<char>(pick(0, 255));
          }
      }
    }
    return out;
  }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  HashtagGenerator gen_;
  std::mt19937 rng_;
};

}  // namespace tartarian::testing
