// Temporal knowledge graph: dense vocabularies, typed nodes, timestamped
// multigraph edges. Immutable after construction; safe for concurrent reads.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tkge/types.hpp"

namespace tkge {

// Bijective label <-> dense id mapping, ids assigned in first-appearance order.
class Vocab {
 public:
  EntityId add_or_get(const std::string& label) {
    auto it = ids_.find(label);
    if (it != ids_.end()) return it->second;
    EntityId id = static_cast<EntityId>(labels_.size());
    labels_.push_back(label);
    ids_.emplace(labels_.back(), id);
    return id;
  }

  std::optional<EntityId> id_of(const std::string& label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label_of(EntityId id) const { return labels_.at(static_cast<std::size_t>(id)); }

  std::size_t size() const { return labels_.size(); }

  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, EntityId> ids_;
};

class TemporalKG {
 public:
  TemporalKG() = default;

  const std::vector<Quadruple>& quadruples() const { return quads_; }
  const Vocab& entities() const { return entities_; }
  const Vocab& relations() const { return relations_; }
  EntityType entity_type(EntityId e) const { return entity_types_.at(static_cast<std::size_t>(e)); }
  const std::vector<EntityType>& entity_types() const { return entity_types_; }

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }
  std::size_t num_edges() const { return quads_.size(); }

  Timestamp tmin() const { return tmin_; }
  Timestamp tmax() const { return tmax_; }
  // Number of distinct day indices spanned, tmax - tmin + 1 (0 when empty).
  std::int64_t time_span() const {
    return quads_.empty() ? 0 : static_cast<std::int64_t>(tmax_) - tmin_ + 1;
  }

  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

  // Degree counts both endpoint roles; a self-loop contributes 2.
  std::int64_t degree(EntityId e) const { return degrees_.at(static_cast<std::size_t>(e)); }
  const std::vector<std::int64_t>& degrees() const { return degrees_; }

  // Other endpoints of all edges incident to e, with multiplicity.
  const std::vector<EntityId>& neighbors(EntityId e) const {
    return adjacency_.at(static_cast<std::size_t>(e));
  }

  const std::vector<EntityId>& entities_of_type(EntityType t) const {
    return by_type_[static_cast<std::size_t>(t)];
  }

  bool contains(const Quadruple& q) const { return quad_set_.count(q) > 0; }

  friend TemporalKG build_graph(std::span<const LabeledQuadruple> quadruples,
                                const std::unordered_map<std::string, EntityType>& entity_types);

 private:
  std::vector<Quadruple> quads_;
  Vocab entities_;
  Vocab relations_;
  std::vector<EntityType> entity_types_;
  std::vector<std::int64_t> degrees_;
  std::vector<std::vector<EntityId>> adjacency_;
  std::array<std::vector<EntityId>, kNumEntityTypes> by_type_;
  std::unordered_set<Quadruple, QuadrupleHash> quad_set_;
  Timestamp tmin_ = 0;
  Timestamp tmax_ = -1;
  std::size_t duplicates_dropped_ = 0;
};

// Builds a TemporalKG from labeled facts plus a label -> type map.
// Vocabularies are assigned densely in first-appearance order (subject before
// object within a tuple); exact (s,r,o,t) duplicates are dropped and counted.
// Throws std::runtime_error naming the offending tuple if an entity label has
// no type entry.
inline TemporalKG build_graph(std::span<const LabeledQuadruple> quadruples,
                              const std::unordered_map<std::string, EntityType>& entity_types) {
  TemporalKG kg;
  kg.quads_.reserve(quadruples.size());

  auto intern_entity = [&](const std::string& label, const LabeledQuadruple& q) -> EntityId {
    auto known = kg.entities_.id_of(label);
    if (known) return *known;
    auto it = entity_types.find(label);
    if (it == entity_types.end()) {
      throw std::runtime_error("build_graph: entity '" + label + "' has no type (tuple " +
                               q.subject + "\t" + q.relation + "\t" + q.object + "\t" +
                               std::to_string(q.t) + ")");
    }
    EntityId id = kg.entities_.add_or_get(label);
    kg.entity_types_.push_back(it->second);
    kg.by_type_[static_cast<std::size_t>(it->second)].push_back(id);
    return id;
  };

  for (const LabeledQuadruple& lq : quadruples) {
    Quadruple q;
    q.subject = intern_entity(lq.subject, lq);
    q.relation = kg.relations_.add_or_get(lq.relation);
    q.object = intern_entity(lq.object, lq);
    q.t = lq.t;
    if (!kg.quad_set_.insert(q).second) {
      ++kg.duplicates_dropped_;
      continue;
    }
    kg.quads_.push_back(q);
  }

  kg.degrees_.assign(kg.entities_.size(), 0);
  kg.adjacency_.assign(kg.entities_.size(), {});
  for (const Quadruple& q : kg.quads_) {
    ++kg.degrees_[static_cast<std::size_t>(q.subject)];
    ++kg.degrees_[static_cast<std::size_t>(q.object)];
    kg.adjacency_[static_cast<std::size_t>(q.subject)].push_back(q.object);
    kg.adjacency_[static_cast<std::size_t>(q.object)].push_back(q.subject);
  }

  if (!kg.quads_.empty()) {
    kg.tmin_ = kg.quads_.front().t;
    kg.tmax_ = kg.quads_.front().t;
    for (const Quadruple& q : kg.quads_) {
      kg.tmin_ = std::min(kg.tmin_, q.t);
      kg.tmax_ = std::max(kg.tmax_, q.t);
    }
  }
  return kg;
}

struct KgStats {
  std::int64_t num_entities = 0;   // |V|
  std::int64_t num_edges = 0;      // |E|
  std::int64_t num_relations = 0;  // |R|
  std::int64_t time_span = 0;      // |T|
  std::int64_t degree_max = 0;     // D_MAX
  double degree_median = 0.0;      // D_MED
};

inline KgStats stats(const TemporalKG& kg) {
  if (kg.num_edges() == 0) throw std::invalid_argument("stats: empty KG");
  KgStats s;
  s.num_entities = static_cast<std::int64_t>(kg.num_entities());
  s.num_edges = static_cast<std::int64_t>(kg.num_edges());
  s.num_relations = static_cast<std::int64_t>(kg.num_relations());
  s.time_span = kg.time_span();

  std::vector<std::int64_t> degs = kg.degrees();
  std::sort(degs.begin(), degs.end());
  s.degree_max = degs.back();
  std::size_t n = degs.size();
  s.degree_median = (n % 2 == 1)
                        ? static_cast<double>(degs[n / 2])
                        : 0.5 * (static_cast<double>(degs[n / 2 - 1]) + static_cast<double>(degs[n / 2]));
  return s;
}

// Subgraph induced by a node set: keeps every tuple whose endpoints are both
// in the set, re-interned in original tuple order.
inline TemporalKG induced_subgraph(const TemporalKG& kg, const std::vector<EntityId>& nodes) {
  std::unordered_set<EntityId> keep(nodes.begin(), nodes.end());
  std::vector<LabeledQuadruple> tuples;
  std::unordered_map<std::string, EntityType> types;
  for (const Quadruple& q : kg.quadruples()) {
    if (!keep.count(q.subject) || !keep.count(q.object)) continue;
    LabeledQuadruple lq;
    lq.subject = kg.entities().label_of(q.subject);
    lq.relation = kg.relations().label_of(q.relation);
    lq.object = kg.entities().label_of(q.object);
    lq.t = q.t;
    types.emplace(lq.subject, kg.entity_type(q.subject));
    types.emplace(lq.object, kg.entity_type(q.object));
    tuples.push_back(std::move(lq));
  }
  return build_graph(tuples, types);
}

}  // namespace tkge
