#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../support/builders.hpp"
#include "tkge/eval.hpp"
#include "tkge/training.hpp"

using namespace tkge;
using namespace tkge::eval;
using test_support::make_typed_kg;

namespace {

struct Fixture {
  TemporalKG kg;
  DatasetSplit split;
  ModelParams params;
  RelativeContextIndex index;
  InteractionIndex interactions;
};

Fixture make_fixture(std::uint64_t seed, int n_users = 6, int n_issues = 8, int n_tuples = 60) {
  Rng rng(seed);
  std::vector<LabeledQuadruple> tuples;
  for (int i = 0; i < n_tuples; ++i) {
    tuples.push_back({"U:u" + std::to_string(rng.next_below(n_users)),
                      rng.coin() ? "open" : "close",
                      "I:i" + std::to_string(rng.next_below(n_issues)),
                      static_cast<Timestamp>(rng.next_below(25))});
  }
  Fixture f{make_typed_kg(tuples), {}, {}, {}, {}};
  const auto& quads = f.kg.quadruples();
  std::size_t cut = quads.size() * 8 / 10;
  f.split.train.assign(quads.begin(), quads.begin() + static_cast<std::ptrdiff_t>(cut));
  f.split.test.assign(quads.begin() + static_cast<std::ptrdiff_t>(cut), quads.end());

  ModelConfig mc;
  mc.kind = ModelKind::rt_de_rotate;
  mc.num_entities = static_cast<std::int32_t>(f.kg.num_entities());
  mc.num_relations = static_cast<std::int32_t>(f.kg.num_relations());
  mc.static_dim = 4;
  mc.diachronic_dim = 4;
  mc.relative_dim = 4;
  f.params = ModelParams::init(mc, Rng(seed ^ 0xbeef));
  Rng wp(seed ^ 0xfeed);
  for (double& w : f.params.relation_importance) w = wp.uniform(-0.4, 0.4);
  f.index = RelativeContextIndex(f.split.train);
  f.interactions = InteractionIndex(f.split.train);
  return f;
}

EvalContext make_ctx(const Fixture& f, Timestamp t_q) {
  EvalContext ctx;
  ctx.kg = &f.kg;
  ctx.params = &f.params;
  ctx.index = &f.index;
  ctx.interactions = &f.interactions;
  ctx.opts.t_q = t_q;
  return ctx;
}

// Independent route: explicit ordering with the truth placed after every
// equal-scored front-group competitor.
std::int64_t oracle_rank(const Fixture& f, const EvalContext& ctx, const Query& q) {
  const bool subj = q.unknown == UnknownSlot::subject;
  EntityId truth = subj ? q.truth.subject : q.truth.object;
  EntityId fixed = subj ? q.truth.object : q.truth.subject;
  ScoreScratch ws(f.params.config);
  struct Row {
    double score;
    bool pushed;
    bool is_truth;
    std::size_t idx;
  };
  std::vector<Row> rows;
  const auto& candidates = f.kg.entities_of_type(f.kg.entity_type(truth));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    EntityId c = candidates[i];
    Quadruple t = q.truth;
    (subj ? t.subject : t.object) = c;
    double score = translational_score(f.params, &f.index, t.subject, t.relation, t.object, t.t,
                                       ctx.opts.t_q, nullptr, ws);
    bool pushed = c != truth && ctx.opts.interaction_rerank && f.interactions.interacts(c, fixed);
    rows.push_back({score, pushed, c == truth, i});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.pushed != b.pushed) return !a.pushed;
    if (a.score != b.score) return a.score < b.score;
    if (a.is_truth != b.is_truth) return !a.is_truth;  // pessimistic: truth last among ties
    return a.idx < b.idx;
  });
  for (std::size_t pos = 0; pos < rows.size(); ++pos) {
    if (rows[pos].is_truth) return static_cast<std::int64_t>(pos) + 1;
  }
  throw std::logic_error("oracle_rank: truth missing");
}

}  // namespace

TEST_CASE("aggregate closed forms") {
  std::vector<std::int64_t> ranks{1, 2, 11};
  auto m = aggregate(ranks);
  CHECK(m.hits1 == doctest::Approx(1.0 / 3.0));
  CHECK(m.hits3 == doctest::Approx(2.0 / 3.0));
  CHECK(m.hits10 == doctest::Approx(2.0 / 3.0));
  CHECK(m.mean_rank == doctest::Approx(14.0 / 3.0));
  CHECK(m.mrr == doctest::Approx((1.0 + 0.5 + 1.0 / 11.0) / 3.0).epsilon(1e-9));
  CHECK(m.mrr == doctest::Approx(0.5303).epsilon(1e-4));

  std::vector<std::int64_t> perfect{1, 1, 1, 1};
  auto p = aggregate(perfect);
  CHECK(p.hits1 == 1.0);
  CHECK(p.hits10 == 1.0);
  CHECK(p.mean_rank == 1.0);
  CHECK(p.mrr == 1.0);
  CHECK(p.se_mean_rank == 0.0);

  CHECK_THROWS_AS(aggregate(std::vector<std::int64_t>{}), std::invalid_argument);
}

TEST_CASE("aggregate invariants on random rank lists") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::int64_t> ranks(1 + rng.next_below(200));
    for (auto& r : ranks) r = 1 + static_cast<std::int64_t>(rng.next_below(50));
    auto m = aggregate(ranks);
    CHECK(m.hits1 <= m.hits3);
    CHECK(m.hits3 <= m.hits10);
    CHECK(m.mrr >= m.hits1);
    CHECK(m.mrr <= 1.0);
    CHECK(m.mrr > 0.0);
    CHECK(m.mean_rank >= 1.0);
  }
}

TEST_CASE("candidates_time spans the evaluated range inclusively") {
  std::vector<Quadruple> split{{0, 0, 1, 10}, {0, 0, 1, 12}};
  auto c = candidates_time(split);
  CHECK(c == std::vector<Timestamp>{10, 11, 12});
  CHECK_THROWS_AS(candidates_time(std::vector<Quadruple>{}), std::invalid_argument);
}

TEST_CASE("candidates_link filters by node type") {
  auto kg = make_typed_kg({
      {"U:a", "r", "R:x", 0},
      {"U:b", "r", "R:y", 0},
      {"U:c", "r", "R:x", 0},
  });
  CHECK(candidates_link(kg, EntityType::User).size() == 3);
  CHECK(candidates_link(kg, EntityType::Repository).size() == 2);
}

TEST_CASE("rerank pushes interacting candidates behind the rest") {
  std::vector<Quadruple> train{{0, 0, 5, 1}};  // entity 0 interacted with 5
  InteractionIndex ix(train);
  std::vector<EntityId> candidates{0, 1, 2};
  std::vector<double> scores{0.5, 0.2, 0.9};

  SUBCASE("no interactions leaves score order") {
    auto order = rerank_prior_interactions(candidates, scores, /*fixed=*/9, /*truth=*/1, ix);
    CHECK(order == std::vector<std::size_t>{1, 0, 2});
  }
  SUBCASE("interactor moves to the back") {
    // fixed entity 5: candidate 0 interacted with it, truth is 1
    auto order = rerank_prior_interactions(candidates, scores, 5, 1, ix);
    CHECK(order == std::vector<std::size_t>{1, 2, 0});
  }
  SUBCASE("the truth itself is never demoted") {
    auto order = rerank_prior_interactions(candidates, scores, 5, 0, ix);
    CHECK(order == std::vector<std::size_t>{1, 0, 2});
  }
}

TEST_CASE("rerank keeps within-group order stable") {
  std::vector<Quadruple> train{{7, 0, 1, 0}, {7, 0, 3, 0}};
  InteractionIndex ix(train);
  std::vector<EntityId> candidates{1, 2, 3, 4};
  std::vector<double> scores{0.2, 0.3, 0.1, 0.4};  // score order: 3(=c2),1(=c0),2,4
  auto order = rerank_prior_interactions(candidates, scores, 7, 4, ix);
  // pushed group keeps score order (c2 then c0), front group too (c1 then c3)
  CHECK(order == std::vector<std::size_t>{1, 3, 2, 0});
}

TEST_CASE("rank_query basics") {
  auto f = make_fixture(400);
  auto ctx = make_ctx(f, 24);
  ScoreScratch ws(f.params.config);

  SUBCASE("rank 1 when the truth scores uniquely best") {
    // drive the model towards the truth by zeroing other users' interactions:
    // instead verify against the oracle on many queries below; here check a
    // degenerate single-candidate type
    auto kg1 = make_typed_kg({{"U:only", "r", "I:x", 0}, {"U:only", "r", "I:y", 1}});
    ModelConfig mc;
    mc.kind = ModelKind::rotate;
    mc.num_entities = static_cast<std::int32_t>(kg1.num_entities());
    mc.num_relations = 1;
    mc.static_dim = 4;
    mc.diachronic_dim = 0;
    mc.relative_dim = 0;
    Fixture g{kg1, {}, ModelParams::init(mc, Rng(4)), RelativeContextIndex(std::vector<Quadruple>{}),
              InteractionIndex(std::vector<Quadruple>{})};
    EvalContext c2 = make_ctx(g, 1);
    Query q{UnknownSlot::subject, kg1.quadruples()[0]};
    ScoreScratch ws2(mc);
    CHECK(rank_query(c2, q, ws2, 0) == 1);  // single User candidate
  }

  SUBCASE("all-equal scores rank pessimistically last") {
    Fixture g = make_fixture(401);
    std::fill(g.params.entity_static.begin(), g.params.entity_static.end(), 0.0);
    std::fill(g.params.entity_amplitude.begin(), g.params.entity_amplitude.end(), 0.0);
    std::fill(g.params.entity_frequency.begin(), g.params.entity_frequency.end(), 0.0);
    std::fill(g.params.entity_phase.begin(), g.params.entity_phase.end(), 0.0);
    std::fill(g.params.time_projection.begin(), g.params.time_projection.end(), 0.0);
    std::fill(g.params.relation_importance.begin(), g.params.relation_importance.end(), 0.0);
    EvalContext c2 = make_ctx(g, 24);
    c2.opts.interaction_rerank = false;
    Query q{UnknownSlot::subject, g.split.test.front()};
    ScoreScratch ws2(g.params.config);
    auto n_users = g.kg.entities_of_type(EntityType::User).size();
    CHECK(rank_query(c2, q, ws2, 0) == static_cast<std::int64_t>(n_users));
  }

  (void)ctx;
  (void)ws;
}

TEST_CASE("rank_query matches the sort-based oracle on random queries") {
  for (std::uint64_t seed : {500u, 501u, 502u}) {
    auto f = make_fixture(seed);
    auto ctx = make_ctx(f, 24);
    ScoreScratch ws(f.params.config);
    std::size_t idx = 0;
    for (const auto& tuple : f.split.test) {
      Query q{idx % 2 == 0 ? UnknownSlot::subject : UnknownSlot::object, tuple};
      CHECK(rank_query(ctx, q, ws, idx) == oracle_rank(f, ctx, q));
      ++idx;
    }
  }
}

TEST_CASE("time queries rank candidate dates with pessimistic ties") {
  auto f = make_fixture(600);
  auto ctx = make_ctx(f, 24);
  ctx.time_candidates = candidates_time(f.split.test);
  ScoreScratch ws(f.params.config);
  Query q{UnknownSlot::time, f.split.test.front()};
  auto rank = rank_query(ctx, q, ws, 0);
  CHECK(rank >= 1);
  CHECK(rank <= static_cast<std::int64_t>(ctx.time_candidates.size()));

  // truth outside the candidate range errors
  Query bad = q;
  bad.truth.t = 999;
  CHECK_THROWS_AS(rank_query(ctx, bad, ws, 0), std::runtime_error);
}

TEST_CASE("random baseline yields mean rank near (k+1)/2") {
  auto kg = make_typed_kg({{"U:a", "r", "I:x", 0}, {"U:a", "r", "I:x", 18}});
  EvalContext ctx;
  ctx.kg = &kg;
  ctx.params = nullptr;  // seeded random baseline
  ctx.baseline_seed = 777;
  for (Timestamp t = 0; t <= 18; ++t) ctx.time_candidates.push_back(t);
  const std::size_t k = ctx.time_candidates.size();

  Rng rng(13);
  std::vector<Query> queries;
  for (int i = 0; i < 2000; ++i) {
    Quadruple truth{0, 0, 1, static_cast<Timestamp>(rng.next_below(k))};
    queries.push_back({UnknownSlot::time, truth});
  }
  auto report = evaluate(ctx, queries);
  const double expected = (static_cast<double>(k) + 1.0) / 2.0;
  CHECK(report.metrics.mean_rank == doctest::Approx(expected).epsilon(0.05));
  CHECK(report.metrics.hits10 == doctest::Approx(10.0 / static_cast<double>(k)).epsilon(0.1));
}

TEST_CASE("evaluate is deterministic and worker-count independent") {
  auto f = make_fixture(700);
  auto ctx = make_ctx(f, 24);
  auto queries = build_link_queries(f.split.test, UnknownSlot::subject);
  auto a = evaluate(ctx, queries);
  auto b = evaluate(ctx, queries);
  CHECK(a.ranks == b.ranks);
  ctx.opts.workers = 3;
  auto c = evaluate(ctx, queries);
  CHECK(a.ranks == c.ranks);
}

TEST_CASE("metrics are invariant under monotone score transforms") {
  // ranks depend only on score order; verify by comparing the pessimistic
  // counts on raw and exp-transformed copies of the same score lists
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> scores(30);
    for (auto& s : scores) s = rng.uniform(-3, 3);
    double truth = scores[7];
    auto rank_of = [&](auto transform) {
      std::int64_t rank = 1;
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i == 7) continue;
        if (transform(scores[i]) <= transform(truth)) ++rank;
      }
      return rank;
    };
    auto r1 = rank_of([](double x) { return x; });
    auto r2 = rank_of([](double x) { return std::exp(x) + 5; });
    CHECK(r1 == r2);
  }
}

TEST_CASE("alternative filtered setting drops known-fact candidates") {
  // class filtered protocol: candidates completing a known (s,r,o) training
  // fact are removed from the pool instead of being pushed down
  auto kg = make_typed_kg({
      {"U:a", "r", "I:x", 0},
      {"U:b", "r", "I:x", 1},
      {"U:c", "s", "I:x", 2},
      {"U:a", "r", "I:y", 3},
  });
  // train contains (a, r, x) and (c, s, x); query asks who r's x at t=1
  std::vector<Quadruple> train{kg.quadruples()[0], kg.quadruples()[2], kg.quadruples()[3]};
  InteractionIndex ix(train);
  ModelConfig mc;
  mc.kind = ModelKind::rotate;
  mc.num_entities = static_cast<std::int32_t>(kg.num_entities());
  mc.num_relations = static_cast<std::int32_t>(kg.num_relations());
  mc.static_dim = 2;
  mc.diachronic_dim = 0;
  mc.relative_dim = 0;
  auto params = ModelParams::allocate(mc);  // all-zero: every candidate ties

  EvalContext ctx;
  ctx.kg = &kg;
  ctx.params = &params;
  ctx.interactions = &ix;
  ctx.opts.filter_known_facts = true;
  Query q{UnknownSlot::subject, kg.quadruples()[1]};  // truth is b
  ScoreScratch ws(mc);
  // users: a, b, c; candidate a is dropped as the known fact (a, r, x);
  // candidate c stays (its known fact uses relation s); all scores tie and
  // ties are pessimistic, so rank = 2
  CHECK(rank_query(ctx, q, ws, 0) == 2);

  ctx.opts.filter_known_facts = false;
  ctx.opts.interaction_rerank = false;
  CHECK(rank_query(ctx, q, ws, 0) == 3);
}

TEST_CASE("relation filters restrict query construction") {
  auto f = make_fixture(800);
  std::unordered_set<RelationId> only{0};
  auto queries = build_link_queries(f.split.test, UnknownSlot::subject, &only);
  for (const auto& q : queries) CHECK(q.truth.relation == 0);
  auto all = build_link_queries(f.split.test, UnknownSlot::subject);
  CHECK(all.size() == f.split.test.size());
  CHECK(queries.size() < all.size());
}
