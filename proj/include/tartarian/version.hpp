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
#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "tartarian/error.hpp"

namespace tartarian {

/// A dotted numeric version with an optional lowercase qualifier, e.g.
/// "9.2.14" or "3.0.0-alpha1".
///
/// Equality and ordering are semantic: trailing zero segments are ignored
/// (1.8 == 1.8.0) and a qualified version sorts below the same unqualified
/// one. Use `to_string` when the spelling matters.
struct Version {
  std::vector<std::uint64_t> segments;
  std::optional<std::string> qualifier;

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (i != 0) out += '.';
      out += std::to_string(segments[i]);
    }
    if (qualifier) {
      out += '-';
      out += *qualifier;
    }
    return out;
  }

  /// Segment at `index`, or 0 past the end (zero padding).
  std::uint64_t segment(std::size_t index) const {
    return index < segments.size() ? segments[index] : 0;
  }
};

inline std::weak_ordering compare(const Version& a, const Version& b) {
  const std::size_t n = std::max(a.segments.size(), b.segments.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.segment(i) <=> b.segment(i); c != 0) return c;
  }
  if (a.qualifier.has_value() != b.qualifier.has_value()) {
    return a.qualifier ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  if (!a.qualifier) return std::weak_ordering::equivalent;
  const int c = a.qualifier->compare(*b.qualifier);
  if (c < 0) return std::weak_ordering::less;
  if (c > 0) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

inline std::weak_ordering operator<=>(const Version& a, const Version& b) {
  return compare(a, b);
}

inline bool operator==(const Version& a, const Version& b) {
  return compare(a, b) == 0;
}

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_qualifier_char(char c) {
  return (c >= 'a' && c <= 'z') || is_digit(c) || c == '.' || c == '-' ||
         c == '_';
}

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// "x" is reserved for series constraints and may not appear as a version
// component, not even inside a qualifier.
inline bool has_wildcard_piece(std::string_view qualifier) {
  std::size_t start = 0;
  while (start <= qualifier.size()) {
    std::size_t end = qualifier.find_first_of(".-", start);
    if (end == std::string_view::npos) end = qualifier.size();
    if (qualifier.substr(start, end - start) == "x") return true;
    start = end + 1;
  }
  return false;
}

}  // namespace detail

inline Version parse_version(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::EmptyInput, "empty version");
  const auto invalid = [&](std::string_view why) {
    return Error(ErrorCode::InvalidVersion,
                 "invalid version '" + std::string(text) + "': " +
                     std::string(why));
  };

  Version v;
  std::size_t pos = 0;
  std::optional<std::size_t> qualifier_start;
  while (true) {
    std::size_t end = pos;
    while (end < text.size() && detail::is_digit(text[end])) ++end;
    if (end == pos) {
      if (v.segments.empty()) {
        throw Error(ErrorCode::NoNumericSegment,
                    "version '" + std::string(text) +
                        "' does not start with a numeric segment");
      }
      qualifier_start = pos;
      break;
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data() + pos, text.data() + end, value);
    if (ec != std::errc{}) throw invalid("numeric segment out of range");
    v.segments.push_back(value);
    pos = end;
    if (pos == text.size()) break;
    if (text[pos] == '.') {
      ++pos;
      if (pos == text.size()) throw invalid("trailing '.'");
      continue;  // a non-digit here starts the qualifier on the next pass
    }
    qualifier_start = text[pos] == '-' ? pos + 1 : pos;
    break;
  }

  if (qualifier_start) {
    std::string q = detail::to_lower(text.substr(*qualifier_start));
    if (q.empty()) throw invalid("empty qualifier");
    if (!std::all_of(q.begin(), q.end(), detail::is_qualifier_char)) {
      throw invalid("qualifier may only contain [a-z0-9._-]");
    }
    const auto is_sep = [](char c) { return c == '.' || c == '-' || c == '_'; };
    if (is_sep(q.front()) || is_sep(q.back())) {
      throw invalid("qualifier must start and end with a letter or digit");
    }
    if (detail::has_wildcard_piece(q)) {
      throw invalid("'x' is only valid as a constraint wildcard");
    }
    v.qualifier = std::move(q);
  }
  return v;
}

// Constraint forms. The surface syntax maps one-to-one:
//   "+"      -> AnyVersion
//   "V+"     -> AtLeast{V}
//   "V.x"    -> Series{V}
//   "V"      -> Exact{V}
struct AnyVersion {
  friend bool operator==(const AnyVersion&, const AnyVersion&) = default;
};
struct AtLeast {
  Version base;
  friend bool operator==(const AtLeast&, const AtLeast&) = default;
};
struct Series {
  Version prefix;
  friend bool operator==(const Series&, const Series&) = default;
};
struct Exact {
  Version base;
  friend bool operator==(const Exact&, const Exact&) = default;
};

using VersionConstraint = std::variant<AnyVersion, AtLeast, Series, Exact>;

inline std::string to_string(const VersionConstraint& c) {
  return std::visit(
      [](const auto& alt) -> std::string {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, AnyVersion>) {
          return "+";
        } else if constexpr (std::is_same_v<T, AtLeast>) {
          return alt.base.to_string() + "+";
        } else if constexpr (std::is_same_v<T, Series>) {
          return alt.prefix.to_string() + ".x";
        } else {
          return alt.base.to_string();
        }
      },
      c);
}

inline VersionConstraint parse_constraint(std::string_view text) {
  const std::string_view body = detail::trim(text);
  if (body.empty()) {
    throw Error(ErrorCode::BadConstraint, "empty version constraint");
  }
  if (body == "+") return AnyVersion{};

  const auto version_of = [&](std::string_view v) {
    try {
      return parse_version(v);
    } catch (const Error& e) {
      throw Error(ErrorCode::BadConstraint, "bad version constraint '" +
                                                std::string(body) +
                                                "': " + e.what());
    }
  };

  if (body.back() == '+') {
    return AtLeast{version_of(body.substr(0, body.size() - 1))};
  }
  if (body.size() > 2 && body[body.size() - 2] == '.' &&
      (body.back() == 'x' || body.back() == 'X')) {
    Version prefix = version_of(body.substr(0, body.size() - 2));
    if (prefix.qualifier) {
      throw Error(ErrorCode::BadConstraint,
                  "series constraint '" + std::string(body) +
                      "' may not carry a qualifier");
    }
    return Series{std::move(prefix)};
  }
  return Exact{version_of(body)};
}

/// Rewrites `from` to `to` before matching, e.g. JDK "8" to "1.8".
struct AliasRule {
  Version from;
  Version to;
};

/// Per-subject version aliases. Subjects are matched exactly.
class AliasMap {
 public:
  AliasMap() = default;

  /// The shipped default: JDK n (5 <= n <= 8) is the same platform as 1.n.
  static AliasMap with_defaults() {
    AliasMap m;
    for (std::uint64_t n = 5; n <= 8; ++n) {
      m.add("JDK", Version{{n}, std::nullopt}, Version{{1, n}, std::nullopt});
    }
    return m;
  }

  void add(std::string subject, Version from, Version to) {
    rules_[std::move(subject)].push_back({std::move(from), std::move(to)});
  }

  std::span<const AliasRule> rules_for(std::string_view subject) const {
    auto it = rules_.find(std::string(subject));
    if (it == rules_.end()) return {};
    return it->second;
  }

  const std::map<std::string, std::vector<AliasRule>>& all() const {
    return rules_;
  }

  bool empty() const { return rules_.empty(); }

 private:
  std::map<std::string, std::vector<AliasRule>> rules_;
};

/// Applies the first rule whose `from` has the same numeric segments as `v`.
/// The qualifier is carried over unchanged.
inline Version normalize(const Version& v, std::span<const AliasRule> rules) {
  for (const AliasRule& rule : rules) {
    Version numeric{v.segments, std::nullopt};
    Version from{rule.from.segments, std::nullopt};
    if (numeric == from) return Version{rule.to.segments, v.qualifier};
  }
  return v;
}

inline bool satisfies(const Version& version, const VersionConstraint& c,
                      std::span<const AliasRule> aliases = {}) {
  const Version v = normalize(version, aliases);
  return std::visit(
      [&](const auto& alt) -> bool {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, AnyVersion>) {
          return true;
        } else if constexpr (std::is_same_v<T, AtLeast>) {
          return v >= normalize(alt.base, aliases);
        } else if constexpr (std::is_same_v<T, Exact>) {
          return v == normalize(alt.base, aliases);
        } else {
          // Numeric prefix match; pre-releases of the prefix itself
          // (9.2-rc1 against 9.2.x) sort below it and are excluded.
          const Version p = normalize(alt.prefix, aliases);
          for (std::size_t i = 0; i < p.segments.size(); ++i) {
            if (v.segment(i) != p.segments[i]) return false;
          }
          return v >= p;
        }
      },
      c);
}

}  // namespace tartarian
