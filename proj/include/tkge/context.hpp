// Relative temporal context: for each (entity, relation) pair, the sorted
// timestamps of training facts that involve the entity under that relation.
// Supports the delta query "time elapsed since the latest such fact strictly
// before t". Built from the training split only.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tkge/types.hpp"

namespace tkge {

class RelativeContextIndex {
 public:
  RelativeContextIndex() = default;

  explicit RelativeContextIndex(std::span<const Quadruple> train) {
    for (const Quadruple& q : train) {
      times_[key(q.subject, q.relation)].push_back(q.t);
      if (q.object != q.subject) times_[key(q.object, q.relation)].push_back(q.t);
    }
    for (auto& [k, list] : times_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  // Sorted, deduplicated event times for (e, r); nullptr when no history.
  const std::vector<Timestamp>* times(EntityId e, RelationId r) const {
    auto it = times_.find(key(e, r));
    return it == times_.end() ? nullptr : &it->second;
  }

  // t - max{t' in H(e,r) : t' < t}, or nullopt when no strictly earlier
  // event exists.
  std::optional<Timestamp> delta(EntityId e, RelationId r, Timestamp t) const {
    const auto* list = times(e, r);
    if (!list) return std::nullopt;
    auto it = std::lower_bound(list->begin(), list->end(), t);
    if (it == list->begin()) return std::nullopt;
    return t - *(it - 1);
  }

  std::size_t num_pairs() const { return times_.size(); }

 private:
  static std::uint64_t key(EntityId e, RelationId r) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)) << 32) |
           static_cast<std::uint32_t>(r);
  }

  std::unordered_map<std::uint64_t, std::vector<Timestamp>> times_;
};

inline RelativeContextIndex build_context_index(std::span<const Quadruple> train) {
  return RelativeContextIndex(train);
}

inline std::optional<Timestamp> relative_delta(const RelativeContextIndex& index, EntityId e,
                                               RelationId r, Timestamp t) {
  return index.delta(e, r, t);
}

}  // namespace tkge
