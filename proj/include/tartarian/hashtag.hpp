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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tartarian/error.hpp"
#include "tartarian/version.hpp"

namespace tartarian {

enum class TagKind {
  BugFix,
  Backport,
  Config,
  Deprecated,
  Improve,
  Inaccessible,
  Removed,
};

inline constexpr std::array<TagKind, 7> kAllTagKinds = {
    TagKind::BugFix,  TagKind::Backport,     TagKind::Config,
    TagKind::Deprecated, TagKind::Improve, TagKind::Inaccessible,
    TagKind::Removed,
};

/// Canonical lowercase tag name, without the leading '#'.
constexpr std::string_view tag_name(TagKind kind) {
  switch (kind) {
    case TagKind::BugFix: return "bugfix";
    case TagKind::Backport: return "backport";
    case TagKind::Config: return "config";
    case TagKind::Deprecated: return "deprecated";
    case TagKind::Improve: return "improve";
    case TagKind::Inaccessible: return "inaccessible";
    case TagKind::Removed: return "removed";
  }
  return "";
}

inline std::optional<TagKind> tag_kind_from_name(std::string_view name) {
  const std::string lowered = detail::to_lower(name);
  for (TagKind kind : kAllTagKinds) {
    if (tag_name(kind) == lowered) return kind;
  }
  return std::nullopt;
}

// Declaration order gives High > Medium > Low.
enum class Priority { Low, Medium, High };

constexpr std::string_view to_string(Priority p) {
  switch (p) {
    case Priority::High: return "High";
    case Priority::Medium: return "Medium";
    case Priority::Low: return "Low";
  }
  return "";
}

constexpr Priority priority_of(TagKind kind) {
  switch (kind) {
    case TagKind::BugFix:
    case TagKind::Config:
    case TagKind::Inaccessible:
      return Priority::High;
    case TagKind::Backport:
    case TagKind::Removed:
      return Priority::Medium;
    case TagKind::Deprecated:
    case TagKind::Improve:
      return Priority::Low;
  }
  return Priority::Low;
}

/// Half-open byte range [begin, end) into a commit message.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// A parsed `#kind{subject, constraint}` annotation.
struct Hashtag {
  TagKind kind = TagKind::BugFix;
  std::string subject;
  VersionConstraint constraint;
  Span span;

  // Two tags are the same tag wherever they occur: span is not compared.
  friend bool operator==(const Hashtag& a, const Hashtag& b) {
    return a.kind == b.kind && a.subject == b.subject &&
           a.constraint == b.constraint;
  }
};

enum class DiagnosticReason { UnknownTag, MalformedBody, EmptySubject, BadConstraint };

constexpr std::string_view to_string(DiagnosticReason r) {
  switch (r) {
    case DiagnosticReason::UnknownTag: return "UnknownTag";
    case DiagnosticReason::MalformedBody: return "MalformedBody";
    case DiagnosticReason::EmptySubject: return "EmptySubject";
    case DiagnosticReason::BadConstraint: return "BadConstraint";
  }
  return "";
}

struct ParseDiagnostic {
  Span span;
  DiagnosticReason reason = DiagnosticReason::MalformedBody;
  std::string detail;
};

struct ParseResult {
  std::vector<Hashtag> hashtags;
  std::vector<ParseDiagnostic> diagnostics;
};

/// A subject may hold anything but the characters that delimit a tag body.
inline bool is_valid_subject(std::string_view subject) {
  if (subject.empty() || detail::trim(subject) != subject) return false;
  return subject.find_first_of("{},#\n\r") == std::string_view::npos;
}

namespace detail {

inline bool is_tag_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || is_digit(c) ||
         c == '_';
}

}  // namespace detail

/// Extracts every `#tag{subject, constraint}` from free text.
///
/// Only a `#word{` opener starts a candidate; `#1135` and other bare
/// references are prose. Each candidate yields either a Hashtag or exactly
/// one diagnostic. A body ends at the first '}'; hitting '{', '#', a line
/// break or the end of the message first makes it malformed, and scanning
/// resumes at that character so a following tag is still found.
inline ParseResult parse_message(std::string_view message) {
  ParseResult result;
  std::size_t pos = 0;
  while (pos < message.size()) {
    const std::size_t hash = message.find('#', pos);
    if (hash == std::string_view::npos) break;
    std::size_t name_end = hash + 1;
    while (name_end < message.size() &&
           detail::is_tag_name_char(message[name_end])) {
      ++name_end;
    }
    if (name_end == hash + 1 || name_end >= message.size() ||
        message[name_end] != '{') {
      pos = hash + 1;
      continue;
    }

    const std::string_view name = message.substr(hash + 1, name_end - hash - 1);
    const std::size_t body_begin = name_end + 1;
    std::size_t stop = message.find_first_of("}{#\n\r", body_begin);
    const bool closed = stop != std::string_view::npos && message[stop] == '}';
    if (stop == std::string_view::npos) stop = message.size();
    const Span span{hash, closed ? stop + 1 : stop};
    pos = closed ? stop + 1 : stop;

    const auto diagnose = [&](DiagnosticReason reason, std::string detail) {
      result.diagnostics.push_back({span, reason, std::move(detail)});
    };

    const std::optional<TagKind> kind = tag_kind_from_name(name);
    if (!kind) {
      diagnose(DiagnosticReason::UnknownTag,
               "unknown tag '#" + std::string(name) + "'");
      continue;
    }
    if (!closed) {
      diagnose(DiagnosticReason::MalformedBody,
               "tag body is not closed by '}'");
      continue;
    }
    const std::string_view body = message.substr(body_begin, stop - body_begin);
    const std::size_t comma = body.find(',');
    if (comma == std::string_view::npos ||
        body.find(',', comma + 1) != std::string_view::npos) {
      diagnose(DiagnosticReason::MalformedBody,
               "expected exactly one ',' between subject and constraint");
      continue;
    }
    const std::string_view subject = detail::trim(body.substr(0, comma));
    if (subject.empty()) {
      diagnose(DiagnosticReason::EmptySubject, "tag subject is empty");
      continue;
    }
    try {
      VersionConstraint constraint = parse_constraint(body.substr(comma + 1));
      result.hashtags.push_back(
          Hashtag{*kind, std::string(subject), std::move(constraint), span});
    } catch (const Error& e) {
      diagnose(DiagnosticReason::BadConstraint, e.what());
    }
  }
  return result;
}

/// Canonical form, e.g. "#bugfix{JDK, 1.8+}".
inline std::string render(const Hashtag& tag) {
  std::string out = "#";
  out += tag_name(tag.kind);
  out += '{';
  out += tag.subject;
  out += ", ";
  out += to_string(tag.constraint);
  out += '}';
  return out;
}

}  // namespace tartarian
