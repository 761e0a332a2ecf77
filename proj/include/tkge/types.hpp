// Core domain types: typed entities, relations, and temporal facts.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tkge {

using EntityId = std::int32_t;
using RelationId = std::int32_t;

// Integer day index relative to the dataset's first day. Sub-day event
// times are truncated to the day.
using Timestamp = std::int32_t;

enum class EntityType : std::uint8_t {
  User = 0,
  Repository,
  Issue,
  PullRequest,
  IssueComment,
  PullRequestReview,
  PullRequestReviewComment,
  CommitComment,
};

inline constexpr std::size_t kNumEntityTypes = 8;

inline constexpr std::array<std::string_view, kNumEntityTypes> kEntityTypeNames = {
    "User",
    "Repository",
    "Issue",
    "PullRequest",
    "IssueComment",
    "PullRequestReview",
    "PullRequestReviewComment",
    "CommitComment",
};

// Short codes as used in relation-code grammars and rule files.
inline constexpr std::array<std::string_view, kNumEntityTypes> kEntityTypeCodes = {
    "U", "R", "I", "P", "IC", "PR", "PRC", "CC",
};

inline std::string_view entity_type_name(EntityType t) {
  return kEntityTypeNames[static_cast<std::size_t>(t)];
}

inline std::string_view entity_type_code(EntityType t) {
  return kEntityTypeCodes[static_cast<std::size_t>(t)];
}

inline std::optional<EntityType> parse_entity_type(std::string_view s) {
  for (std::size_t i = 0; i < kNumEntityTypes; ++i) {
    if (s == kEntityTypeNames[i] || s == kEntityTypeCodes[i]) {
      return static_cast<EntityType>(i);
    }
  }
  return std::nullopt;
}

// One temporal fact (s, r, o, t).
struct Quadruple {
  EntityId subject = -1;
  RelationId relation = -1;
  EntityId object = -1;
  Timestamp t = 0;

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
};

struct QuadrupleHash {
  std::size_t operator()(const Quadruple& q) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto fold = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    fold(static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.subject)));
    fold(static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.relation)));
    fold(static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.object)));
    fold(static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.t)));
    return static_cast<std::size_t>(h);
  }
};

// A fact still expressed with string labels, before vocabularies exist.
struct LabeledQuadruple {
  std::string subject;
  std::string relation;
  std::string object;
  Timestamp t = 0;

  friend bool operator==(const LabeledQuadruple&, const LabeledQuadruple&) = default;
};

}  // namespace tkge
