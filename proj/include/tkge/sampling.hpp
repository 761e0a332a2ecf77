// Down-sampling strategies for large temporal KGs.
//
// Snowball: seed a max-priority queue with the top-K degree nodes, pop the
// highest-degree node into the sample, push S randomly drawn incident
// neighbors, stop once the sample reaches N nodes. The queue may hold
// duplicates; already-selected nodes are skipped on pop. If the queue runs
// dry before N (disconnected seed region), it is re-seeded with the highest
// degree unselected node so the sample always reaches min(N, |V|).
//
// Temporal: score each Repository node's related subgraph by
// popularity = W1 * size + W2 * time-span, then union subgraphs in
// descending popularity while the sample is below N.

#pragma once

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "tkge/graph.hpp"
#include "tkge/parallel.hpp"
#include "tkge/rng.hpp"
#include "tkge/types.hpp"

namespace tkge::sampling {

struct SamplerConfig {
  std::int64_t target_nodes = 0;  // N
  int growth = 1;                 // S
  int seeds = 1;                  // K
  double w1 = 1.0;                // size importance
  double w2 = 1.0;                // time-span importance
  std::uint64_t seed = 0;

  void validate() const {
    if (target_nodes <= 0) throw std::invalid_argument("SamplerConfig: N must be positive");
    if (growth < 1) throw std::invalid_argument("SamplerConfig: S must be >= 1");
    if (seeds < 1) throw std::invalid_argument("SamplerConfig: K must be >= 1");
    if (w1 <= 0 || w2 <= 0) throw std::invalid_argument("SamplerConfig: W1, W2 must be positive");
  }
};

struct SnowballResult {
  std::vector<EntityId> nodes;  // selection order
  TemporalKG subgraph;          // induced on the selected nodes
};

inline SnowballResult snowball_sample(const TemporalKG& kg, const SamplerConfig& config) {
  config.validate();
  const std::int64_t V = static_cast<std::int64_t>(kg.num_entities());
  if (V == 0) throw std::invalid_argument("snowball_sample: empty KG");
  if (config.target_nodes > V) throw std::invalid_argument("snowball_sample: N exceeds |V|");
  if (config.seeds > V) throw std::invalid_argument("snowball_sample: K exceeds |V|");

  // descending degree, ties by id, for seeding and re-seeding
  std::vector<EntityId> by_degree(static_cast<std::size_t>(V));
  for (std::int64_t i = 0; i < V; ++i) by_degree[static_cast<std::size_t>(i)] = static_cast<EntityId>(i);
  std::sort(by_degree.begin(), by_degree.end(), [&kg](EntityId a, EntityId b) {
    if (kg.degree(a) != kg.degree(b)) return kg.degree(a) > kg.degree(b);
    return a < b;
  });

  // max-heap on (degree, then smaller id first)
  auto cmp = [&kg](EntityId a, EntityId b) {
    if (kg.degree(a) != kg.degree(b)) return kg.degree(a) < kg.degree(b);
    return a > b;
  };
  std::priority_queue<EntityId, std::vector<EntityId>, decltype(cmp)> queue(cmp);
  for (int i = 0; i < config.seeds; ++i) queue.push(by_degree[static_cast<std::size_t>(i)]);

  Rng rng = Rng(config.seed).stream("snowball");
  std::vector<std::uint8_t> selected(static_cast<std::size_t>(V), 0);
  std::vector<EntityId> picks;
  std::size_t reseed_cursor = 0;
  std::vector<EntityId> neighbor_scratch;

  while (static_cast<std::int64_t>(picks.size()) < config.target_nodes) {
    if (queue.empty()) {
      while (reseed_cursor < by_degree.size() && selected[static_cast<std::size_t>(by_degree[reseed_cursor])]) {
        ++reseed_cursor;
      }
      queue.push(by_degree[reseed_cursor]);
      continue;
    }
    EntityId node = queue.top();
    queue.pop();
    if (selected[static_cast<std::size_t>(node)]) continue;
    selected[static_cast<std::size_t>(node)] = 1;
    picks.push_back(node);

    // S incident edges without replacement, capped at the incident count
    const auto& incident = kg.neighbors(node);
    if (incident.empty()) continue;
    neighbor_scratch = incident;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(config.growth),
                                                   neighbor_scratch.size());
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.next_below(neighbor_scratch.size() - i));
      std::swap(neighbor_scratch[i], neighbor_scratch[j]);
      queue.push(neighbor_scratch[i]);
    }
  }

  SnowballResult result;
  result.nodes = std::move(picks);
  result.subgraph = induced_subgraph(kg, result.nodes);
  return result;
}

// P(G) = W1 * S_G + W2 * T_G.
inline double popularity_score(std::int64_t num_tuples, std::int64_t time_span_days, double w1,
                               double w2) {
  if (num_tuples <= 0) throw std::invalid_argument("popularity_score: empty subgraph");
  return w1 * static_cast<double>(num_tuples) + w2 * static_cast<double>(time_span_days);
}

struct RepoSubgraph {
  EntityId repo = -1;
  std::string label;
  std::vector<EntityId> nodes;
  std::int64_t num_tuples = 0;     // S_G
  std::int64_t time_span = 0;      // T_G in days
  double popularity = 0.0;
};

inline double popularity(const RepoSubgraph& g, double w1, double w2) {
  return popularity_score(g.num_tuples, g.time_span, w1, w2);
}

// Related nodes of a repository: every node co-occurring with it in a tuple,
// plus nodes co-occurring with those issue / pull-request nodes (two hops
// through the artifacts).
inline std::vector<EntityId> related_nodes(const TemporalKG& kg, EntityId repo) {
  std::unordered_set<EntityId> related{repo};
  std::vector<EntityId> artifacts;
  for (EntityId n : kg.neighbors(repo)) {
    if (related.insert(n).second) {
      EntityType t = kg.entity_type(n);
      if (t == EntityType::Issue || t == EntityType::PullRequest) artifacts.push_back(n);
    }
  }
  for (EntityId a : artifacts) {
    for (EntityId n : kg.neighbors(a)) related.insert(n);
  }
  std::vector<EntityId> out(related.begin(), related.end());
  std::sort(out.begin(), out.end());
  return out;
}

struct TemporalSampleResult {
  std::vector<RepoSubgraph> ranked;  // descending popularity
  std::vector<EntityId> nodes;       // union of chosen subgraphs
  TemporalKG subgraph;
};

inline TemporalSampleResult temporal_sample(const TemporalKG& kg, double w1, double w2,
                                            std::int64_t target_nodes, int workers = 1) {
  const auto& repos = kg.entities_of_type(EntityType::Repository);
  if (repos.empty()) throw std::invalid_argument("temporal_sample: no Repository nodes");
  if (target_nodes <= 0) throw std::invalid_argument("temporal_sample: N must be positive");

  TemporalSampleResult result;
  result.ranked.resize(repos.size());
  // per-repository scoring is independent; the final ordering does not
  // depend on the worker count
  parallel_for(repos.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      EntityId repo = repos[i];
      RepoSubgraph g;
      g.repo = repo;
      g.label = kg.entities().label_of(repo);
      g.nodes = related_nodes(kg, repo);
      std::unordered_set<EntityId> membership(g.nodes.begin(), g.nodes.end());
      bool first = true;
      Timestamp lo = 0, hi = 0;
      for (const Quadruple& q : kg.quadruples()) {
        if (!membership.count(q.subject) || !membership.count(q.object)) continue;
        ++g.num_tuples;
        lo = first ? q.t : std::min(lo, q.t);
        hi = first ? q.t : std::max(hi, q.t);
        first = false;
      }
      // a repository has degree >= 1 and its incident tuples stay inside the
      // related set, so num_tuples >= 1 here
      g.time_span = first ? 0 : static_cast<std::int64_t>(hi) - lo + 1;
      g.popularity = popularity_score(g.num_tuples, g.time_span, w1, w2);
      result.ranked[i] = std::move(g);
    }
  });
  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const RepoSubgraph& a, const RepoSubgraph& b) {
              if (a.popularity != b.popularity) return a.popularity > b.popularity;
              return a.label < b.label;
            });

  std::unordered_set<EntityId> chosen;
  for (const RepoSubgraph& g : result.ranked) {
    if (static_cast<std::int64_t>(chosen.size()) >= target_nodes) break;
    for (EntityId n : g.nodes) {
      if (chosen.insert(n).second) result.nodes.push_back(n);
    }
  }
  result.subgraph = induced_subgraph(kg, result.nodes);
  return result;
}

}  // namespace tkge::sampling
