// Ranking evaluation for time-conditioned link prediction and time
// prediction.
//
// Link queries rank candidate entities of the truth's node type; time
// queries rank candidate dates in the evaluated split's min-max range.
// Ranks are pessimistic: the truth is placed after equal-scored competitors.
// Two re-ranking heuristics apply to link queries: the same-type candidate
// filter, and pushing candidates with prior training interactions with the
// query's fixed entity behind all non-interacting candidates (the held-out
// answer itself is never demoted).

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tkge/context.hpp"
#include "tkge/gradients.hpp"
#include "tkge/graph.hpp"
#include "tkge/model.hpp"
#include "tkge/parallel.hpp"
#include "tkge/types.hpp"

namespace tkge::eval {

enum class UnknownSlot { subject, object, time };

struct Query {
  UnknownSlot unknown = UnknownSlot::object;
  Quadruple truth;  // the fully specified held-out fact
};

struct RankingResult {
  std::size_t num_queries = 0;
  double hits1 = 0, hits3 = 0, hits10 = 0;
  double mean_rank = 0, mrr = 0;
  double se_hits1 = 0, se_hits3 = 0, se_hits10 = 0;
  double se_mean_rank = 0, se_mrr = 0;
};

inline RankingResult aggregate(std::span<const std::int64_t> ranks) {
  if (ranks.empty()) throw std::invalid_argument("aggregate: no ranks");
  RankingResult res;
  res.num_queries = ranks.size();
  const double n = static_cast<double>(ranks.size());
  double sum_rank = 0, sum_rr = 0;
  std::size_t h1 = 0, h3 = 0, h10 = 0;
  for (auto r : ranks) {
    sum_rank += static_cast<double>(r);
    sum_rr += 1.0 / static_cast<double>(r);
    if (r <= 1) ++h1;
    if (r <= 3) ++h3;
    if (r <= 10) ++h10;
  }
  res.hits1 = static_cast<double>(h1) / n;
  res.hits3 = static_cast<double>(h3) / n;
  res.hits10 = static_cast<double>(h10) / n;
  res.mean_rank = sum_rank / n;
  res.mrr = sum_rr / n;

  auto bernoulli_se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  res.se_hits1 = bernoulli_se(res.hits1);
  res.se_hits3 = bernoulli_se(res.hits3);
  res.se_hits10 = bernoulli_se(res.hits10);
  if (ranks.size() > 1) {
    double var_rank = 0, var_rr = 0;
    for (auto r : ranks) {
      var_rank += (static_cast<double>(r) - res.mean_rank) * (static_cast<double>(r) - res.mean_rank);
      var_rr += (1.0 / static_cast<double>(r) - res.mrr) * (1.0 / static_cast<double>(r) - res.mrr);
    }
    var_rank /= n - 1.0;
    var_rr /= n - 1.0;
    res.se_mean_rank = std::sqrt(var_rank / n);
    res.se_mrr = std::sqrt(var_rr / n);
  }
  return res;
}

// Training-split interaction structure backing the re-ranking heuristic and
// the alternative known-fact filter.
class InteractionIndex {
 public:
  InteractionIndex() = default;

  explicit InteractionIndex(std::span<const Quadruple> train) {
    for (const Quadruple& q : train) {
      neighbors_[q.subject].insert(q.object);
      neighbors_[q.object].insert(q.subject);
      known_.insert(fact_key(q.subject, q.relation, q.object));
    }
  }

  bool interacts(EntityId a, EntityId b) const {
    auto it = neighbors_.find(a);
    return it != neighbors_.end() && it->second.count(b) > 0;
  }

  // True when (s, r, o) appears in training at any timestamp.
  bool known_fact(EntityId s, RelationId r, EntityId o) const {
    return known_.count(fact_key(s, r, o)) > 0;
  }

 private:
  static std::uint64_t fact_key(EntityId s, RelationId r, EntityId o) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 40) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r)) << 20) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(o)) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(o)) << 44);
  }

  std::unordered_map<EntityId, std::unordered_set<EntityId>> neighbors_;
  std::unordered_set<std::uint64_t> known_;
};

// All entities sharing the truth's node type.
inline const std::vector<EntityId>& candidates_link(const TemporalKG& kg, EntityType truth_type) {
  return kg.entities_of_type(truth_type);
}

// All integer days in the evaluated split's [min t, max t], inclusive.
inline std::vector<Timestamp> candidates_time(std::span<const Quadruple> eval_split) {
  if (eval_split.empty()) throw std::invalid_argument("candidates_time: empty split");
  Timestamp lo = eval_split.front().t, hi = eval_split.front().t;
  for (const Quadruple& q : eval_split) {
    lo = std::min(lo, q.t);
    hi = std::max(hi, q.t);
  }
  std::vector<Timestamp> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Timestamp t = lo; t <= hi; ++t) out.push_back(t);
  return out;
}

// Stable push-down reordering used by link ranking: candidates with any prior
// training interaction with `fixed` move after all non-interacting candidates.
// Returns candidate indices in the adjusted order. The baseline order is
// ascending score with ties kept in candidate order; the truth is exempt from
// the push-down.
inline std::vector<std::size_t> rerank_prior_interactions(
    std::span<const EntityId> candidates, std::span<const double> scores, EntityId fixed,
    EntityId truth, const InteractionIndex& interactions) {
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<std::size_t> front, back;
  for (std::size_t i : order) {
    EntityId c = candidates[i];
    bool pushed = c != truth && interactions.interacts(c, fixed);
    (pushed ? back : front).push_back(i);
  }
  front.insert(front.end(), back.begin(), back.end());
  return front;
}

struct EvalOptions {
  Timestamp t_q = 0;               // delta anchor: max train timestamp
  bool type_filter = true;         // same-type candidate restriction
  bool interaction_rerank = true;  // push down prior interactors
  bool filter_known_facts = false; // alternative: drop candidates forming a
                                   // known (s,r,o) training fact instead of
                                   // pushing interactors down
  int workers = 1;
};

struct EvalContext {
  const TemporalKG* kg = nullptr;
  const ModelParams* params = nullptr;          // null -> seeded random baseline
  const RelativeContextIndex* index = nullptr;  // required for relative kinds
  const InteractionIndex* interactions = nullptr;
  std::vector<Timestamp> time_candidates;       // for time queries
  EvalOptions opts;
  std::uint64_t baseline_seed = 0;
};

namespace detail {

inline double baseline_score(std::uint64_t seed, std::uint64_t query_idx, std::uint64_t key) {
  std::uint64_t state = tkge::detail::mix(tkge::detail::mix(seed, query_idx), key);
  return tkge::detail::splitmix64(state) * 0x1.0p-64;
}

struct QueryScorer {
  const EvalContext& ctx;
  ScoreScratch* scratch;
  std::uint64_t query_idx;

  double operator()(const Quadruple& q) const {
    if (!ctx.params) {
      std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.subject)) << 42) ^
                          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.object)) << 21) ^
                          static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.t));
      return baseline_score(ctx.baseline_seed, query_idx, key);
    }
    const ModelParams& p = *ctx.params;
    if (p.config.kind == ModelKind::rt_bilinear) {
      return -rt_bilinear_score(p, *ctx.index, q.subject, q.relation, q.object, q.t, ctx.opts.t_q);
    }
    return translational_score(p, ctx.index, q.subject, q.relation, q.object, q.t, ctx.opts.t_q,
                               nullptr, *scratch);
  }
};

}  // namespace detail

// Rank of the truth among candidates; pessimistic ties. Throws if the truth
// is not among the candidates.
inline std::int64_t rank_query(const EvalContext& ctx, const Query& query, ScoreScratch& scratch,
                               std::uint64_t query_idx) {
  detail::QueryScorer score{ctx, &scratch, query_idx};

  if (query.unknown == UnknownSlot::time) {
    const auto& candidates = ctx.time_candidates;
    bool truth_seen = false;
    double truth_score = 0.0;
    std::vector<double> scores(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      Quadruple q = query.truth;
      q.t = candidates[i];
      scores[i] = score(q);
      if (candidates[i] == query.truth.t) {
        truth_seen = true;
        truth_score = scores[i];
      }
    }
    if (!truth_seen) throw std::runtime_error("rank_query: truth timestamp not in candidate range");
    std::int64_t rank = 1;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i] == query.truth.t) continue;
      if (scores[i] <= truth_score) ++rank;
    }
    return rank;
  }

  const bool subject_unknown = query.unknown == UnknownSlot::subject;
  const EntityId truth_entity = subject_unknown ? query.truth.subject : query.truth.object;
  const EntityId fixed_entity = subject_unknown ? query.truth.object : query.truth.subject;

  const std::vector<EntityId>* candidates;
  std::vector<EntityId> all;
  if (ctx.opts.type_filter) {
    candidates = &candidates_link(*ctx.kg, ctx.kg->entity_type(truth_entity));
  } else {
    all.resize(ctx.kg->num_entities());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<EntityId>(i);
    candidates = &all;
  }

  double truth_score = 0.0;
  bool truth_seen = false;
  std::int64_t better = 0, ties = 0;

  // Pushed-down candidates sit behind the whole front group, and the truth
  // is always in the front group, so they cannot change its rank and are
  // skipped without scoring.
  std::vector<double> scores;
  scores.reserve(candidates->size());
  for (EntityId c : *candidates) {
    Quadruple q = query.truth;
    (subject_unknown ? q.subject : q.object) = c;
    bool is_truth = c == truth_entity;
    if (!is_truth && ctx.opts.filter_known_facts && ctx.interactions &&
        ctx.interactions->known_fact(q.subject, q.relation, q.object)) {
      continue;  // classic filtered setting: drop known true facts
    }
    bool pushed = !is_truth && ctx.opts.interaction_rerank && !ctx.opts.filter_known_facts &&
                  ctx.interactions && ctx.interactions->interacts(c, fixed_entity);
    if (pushed) continue;  // behind every front-group candidate, never ahead of the truth
    double sc = score(q);
    if (is_truth) {
      truth_seen = true;
      truth_score = sc;
    } else {
      scores.push_back(sc);
    }
  }
  if (!truth_seen) throw std::runtime_error("rank_query: truth entity not among candidates");
  for (double sc : scores) {
    if (sc < truth_score) ++better;
    else if (sc == truth_score) ++ties;
  }
  return 1 + better + ties;
}

struct EvalReport {
  std::vector<std::int64_t> ranks;
  RankingResult metrics;
};

inline EvalReport evaluate(const EvalContext& ctx, std::span<const Query> queries) {
  EvalReport report;
  report.ranks.assign(queries.size(), 0);
  ModelConfig cfg;
  if (ctx.params) {
    cfg = ctx.params->config;
  } else {
    cfg.num_entities = static_cast<std::int32_t>(std::max<std::size_t>(ctx.kg ? ctx.kg->num_entities() : 1, 1));
    cfg.num_relations = static_cast<std::int32_t>(std::max<std::size_t>(ctx.kg ? ctx.kg->num_relations() : 1, 1));
    cfg.kind = ModelKind::rotate;
    cfg.static_dim = 2;
    cfg.diachronic_dim = 0;
    cfg.relative_dim = 0;
  }
  parallel_for(queries.size(), ctx.opts.workers, [&](std::size_t begin, std::size_t end) {
    ScoreScratch scratch(cfg);
    for (std::size_t i = begin; i < end; ++i) {
      report.ranks[i] = rank_query(ctx, queries[i], scratch, i);
    }
  });
  report.metrics = aggregate(report.ranks);
  return report;
}

// Query construction from held-out tuples, optionally restricted to a
// relation subset.
inline std::vector<Query> build_link_queries(std::span<const Quadruple> tuples, UnknownSlot slot,
                                             const std::unordered_set<RelationId>* relations = nullptr) {
  if (slot == UnknownSlot::time) throw std::invalid_argument("build_link_queries: slot must be an entity");
  std::vector<Query> out;
  for (const Quadruple& q : tuples) {
    if (relations && !relations->count(q.relation)) continue;
    out.push_back({slot, q});
  }
  return out;
}

inline std::vector<Query> build_time_queries(std::span<const Quadruple> tuples,
                                             const std::unordered_set<RelationId>* relations = nullptr) {
  std::vector<Query> out;
  for (const Quadruple& q : tuples) {
    if (relations && !relations->count(q.relation)) continue;
    out.push_back({UnknownSlot::time, q});
  }
  return out;
}

}  // namespace tkge::eval
