#include <doctest.h>

#include <cmath>

#include "../support/builders.hpp"
#include "tkge/training.hpp"

using namespace tkge;
using namespace tkge::train;
using test_support::make_typed_kg;

namespace {

TemporalKG training_kg(int n_users, int n_issues, int n_tuples, int days, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledQuadruple> tuples;
  for (int i = 0; i < n_tuples; ++i) {
    tuples.push_back({"U:u" + std::to_string(rng.next_below(n_users)),
                      rng.coin() ? "open" : "close",
                      "I:i" + std::to_string(rng.next_below(n_issues)),
                      static_cast<Timestamp>(rng.next_below(days))});
  }
  return make_typed_kg(tuples);
}

}  // namespace

TEST_CASE("adversarial weights closed forms") {
  SUBCASE("equal scores halve") {
    std::vector<double> f{1.3, 1.3};
    auto w = adversarial_weights(f, 0.7);
    CHECK(w[0] == doctest::Approx(0.5));
    CHECK(w[1] == doctest::Approx(0.5));
  }
  SUBCASE("softmax of (ln 2, 0) at eta 1") {
    std::vector<double> f{std::log(2.0), 0.0};
    auto w = adversarial_weights(f, 1.0);
    CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("weights sum to 1 and shift invariance holds") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> f(1 + rng.next_below(40));
      for (auto& v : f) v = rng.uniform(-30, 30);
      auto w = adversarial_weights(f, 0.5);
      double sum = 0;
      for (double v : w) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

      std::vector<double> shifted = f;
      for (auto& v : shifted) v += 17.5;
      auto w2 = adversarial_weights(shifted, 0.5);
      for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == doctest::Approx(w2[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("loss closed forms and oracle") {
  SUBCASE("positive at the margin, no negatives") {
    CHECK(loss(6.0, {}, {}, 6.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("one negative at the margin too") {
    std::vector<double> negs{6.0};
    std::vector<double> w{1.0};
    CHECK(loss(6.0, negs, w, 6.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("random inputs match the direct formula") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      double pos = rng.uniform(0, 12);
      std::vector<double> negs(1 + rng.next_below(10));
      std::vector<double> f(negs.size());
      for (std::size_t i = 0; i < negs.size(); ++i) {
        negs[i] = rng.uniform(0, 12);
        f[i] = -negs[i];
      }
      auto w = adversarial_weights(f, 0.5);
      double direct = -std::log(1.0 / (1.0 + std::exp(-(6.0 - pos))));
      for (std::size_t i = 0; i < negs.size(); ++i) {
        direct -= w[i] * std::log(1.0 / (1.0 + std::exp(-(negs[i] - 6.0))));
      }
      double got = loss(pos, negs, w, 6.0);
      CHECK(got == doctest::Approx(direct).epsilon(1e-12));
      CHECK(got >= 0.0);
    }
  }
}

TEST_CASE("l3 penalty") {
  ModelConfig cfg;
  cfg.kind = ModelKind::rt_de_rotate;
  cfg.num_entities = 4;
  cfg.num_relations = 2;
  cfg.static_dim = 4;
  cfg.diachronic_dim = 2;
  cfg.relative_dim = 2;

  SUBCASE("lambda zero") {
    auto p = ModelParams::init(cfg, Rng(1));
    CHECK(l3_penalty(p, 0.0) == 0.0);
  }
  SUBCASE("single weight cubes") {
    auto p = ModelParams::allocate(cfg);
    p.entity_static[0] = 2.0;
    CHECK(l3_penalty(p, 1.0) == doctest::Approx(8.0));
    p.entity_static[0] = -2.0;
    CHECK(l3_penalty(p, 1.0) == doctest::Approx(8.0));
  }
  SUBCASE("matches a naive sum over exactly the four tables") {
    auto p = ModelParams::init(cfg, Rng(5));
    Rng wp(6);
    for (double& w : p.relation_importance) w = wp.uniform(-1, 1);
    double want = 0;
    for (double w : p.entity_static) want += std::abs(w * w * w);
    for (double w : p.entity_amplitude) want += std::abs(w * w * w);
    for (double w : p.time_projection) want += std::abs(w * w * w);
    for (double w : p.relation_importance) want += std::abs(w * w * w);
    CHECK(l3_penalty(p, 0.3) == doctest::Approx(0.3 * want).epsilon(1e-12));
    // frequencies, phases, and rotations are exempt
    for (double& w : p.entity_frequency) w += 10.0;
    for (double& w : p.entity_phase) w += 10.0;
    for (double& w : p.relation_phase) w += 10.0;
    CHECK(l3_penalty(p, 0.3) == doctest::Approx(0.3 * want).epsilon(1e-12));
  }
  SUBCASE("monotone in |w|") {
    auto p = ModelParams::allocate(cfg);
    p.entity_static[3] = 0.5;
    double small = l3_penalty(p, 1.0);
    p.entity_static[3] = -0.75;
    CHECK(l3_penalty(p, 1.0) > small);
  }
}

TEST_CASE("negative sampling") {
  auto kg = training_kg(6, 10, 80, 20, 11);
  NegativeSampler sampler(kg, kg.quadruples());
  TrainConfig cfg;
  cfg.neg_time_agnostic = 5;
  cfg.neg_time_dependent = 3;

  SUBCASE("counts and kinds") {
    Rng rng(1);
    const Quadruple pos = kg.quadruples()[0];
    std::vector<Quadruple> negs;
    sampler.sample(pos, cfg, rng, negs);
    REQUIRE(negs.size() == 8);
    for (int i = 0; i < 5; ++i) {
      const Quadruple& n = negs[static_cast<std::size_t>(i)];
      CHECK(n.t == pos.t);
      CHECK(n.relation == pos.relation);
      CHECK((n.subject != pos.subject || n.object != pos.object));
      // typed corruption preserves the replaced slot's type
      if (n.subject != pos.subject) {
        CHECK(kg.entity_type(n.subject) == kg.entity_type(pos.subject));
        CHECK(n.object == pos.object);
      } else {
        CHECK(kg.entity_type(n.object) == kg.entity_type(pos.object));
      }
    }
    for (int i = 5; i < 8; ++i) {
      const Quadruple& n = negs[static_cast<std::size_t>(i)];
      CHECK(n.subject == pos.subject);
      CHECK(n.object == pos.object);
      CHECK(n.t != pos.t);
      CHECK(n.t >= sampler.train_tmin());
      CHECK(n.t <= sampler.train_tmax());
    }
  }

  SUBCASE("no negative equals its positive") {
    Rng rng(2);
    for (const auto& pos : kg.quadruples()) {
      std::vector<Quadruple> negs;
      sampler.sample(pos, cfg, rng, negs);
      for (const auto& n : negs) CHECK(n != pos);
    }
  }

  SUBCASE("fixed seed reproduces batches") {
    const Quadruple pos = kg.quadruples()[3];
    Rng a(77), b(77);
    std::vector<Quadruple> na, nb;
    sampler.sample(pos, cfg, a, na);
    sampler.sample(pos, cfg, b, nb);
    CHECK(na == nb);
  }
}

TEST_CASE("two-day span forces the other day") {
  auto kg = make_typed_kg({
      {"U:a", "r", "I:x", 0},
      {"U:b", "r", "I:y", 1},
      {"U:a", "r", "I:y", 0},
  });
  NegativeSampler sampler(kg, kg.quadruples());
  TrainConfig cfg;
  cfg.neg_time_agnostic = 0;
  cfg.neg_time_dependent = 8;
  Rng rng(5);
  std::vector<Quadruple> negs;
  sampler.sample(kg.quadruples()[0], cfg, rng, negs);
  for (const auto& n : negs) CHECK(n.t == 1);
}

TEST_CASE("singleton entity type falls back to untyped corruption") {
  // only one Repository: corrupting its slot must fall back
  auto kg = make_typed_kg({
      {"U:a", "st", "R:solo", 0},
      {"U:b", "st", "R:solo", 1},
      {"U:c", "st", "R:solo", 2},
  });
  NegativeSampler sampler(kg, kg.quadruples());
  TrainConfig cfg;
  cfg.neg_time_agnostic = 40;
  cfg.neg_time_dependent = 0;
  Rng rng(9);
  std::vector<Quadruple> negs;
  sampler.sample(kg.quadruples()[0], cfg, rng, negs);
  CHECK(negs.size() == 40);
  CHECK(sampler.untyped_fallbacks() > 0);
}

TEST_CASE("time negatives impossible on a one-day train split") {
  auto kg = make_typed_kg({{"U:a", "r", "I:x", 3}, {"U:b", "r", "I:x", 3}});
  NegativeSampler sampler(kg, kg.quadruples());
  TrainConfig cfg;
  cfg.neg_time_dependent = 1;
  Rng rng(1);
  std::vector<Quadruple> negs;
  CHECK_THROWS_AS(sampler.sample(kg.quadruples()[0], cfg, rng, negs), std::runtime_error);
}

TEST_CASE("learning rate decays once after warmup") {
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.warmup_steps = 10;
  cfg.warmup_decay = 0.1;
  CHECK(learning_rate_at(cfg, 0) == doctest::Approx(1e-3));
  CHECK(learning_rate_at(cfg, 9) == doctest::Approx(1e-3));
  CHECK(learning_rate_at(cfg, 10) == doctest::Approx(1e-4));
  CHECK(learning_rate_at(cfg, 1000) == doctest::Approx(1e-4));
}

TEST_CASE("zero-gradient point leaves parameters fixed") {
  // all-zero parameters are a stationary point of the L1 terms under the
  // sign subgradient; with lambda = 0 the optimizer must not move
  ModelConfig mc;
  mc.kind = ModelKind::rt_de_rotate;
  mc.num_entities = 4;
  mc.num_relations = 2;
  mc.static_dim = 4;
  mc.diachronic_dim = 2;
  mc.relative_dim = 2;
  auto params = ModelParams::allocate(mc);

  auto kg = training_kg(2, 2, 10, 4, 21);
  RelativeContextIndex index(kg.quadruples());
  NegativeSampler sampler(kg, kg.quadruples());
  TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.neg_time_agnostic = 2;
  cfg.neg_time_dependent = 2;
  cfg.l3_lambda = 0.0;
  cfg.dropout = 0.0;
  cfg.learning_rate = 0.1;

  Adam adam(mc);
  GradientTables grads = GradientTables::allocate(mc);
  auto batch = make_batch(sampler, kg.quadruples(), cfg, 0, Rng(1));
  auto before = params;
  train_step(params, adam, grads, &index, batch, cfg, 0);
  CHECK(params.entity_static == before.entity_static);
  CHECK(params.relation_phase == before.relation_phase);
  CHECK(params.time_projection == before.time_projection);
}

TEST_CASE("non-finite loss aborts with a diagnostic") {
  ModelConfig mc;
  mc.kind = ModelKind::de_rotate;
  mc.num_entities = 4;
  mc.num_relations = 2;
  mc.static_dim = 4;
  mc.diachronic_dim = 2;
  mc.relative_dim = 0;
  auto params = ModelParams::init(mc, Rng(1));
  params.entity_static[0] = std::numeric_limits<double>::quiet_NaN();

  auto kg = training_kg(2, 2, 10, 4, 22);
  RelativeContextIndex index(kg.quadruples());
  NegativeSampler sampler(kg, kg.quadruples());
  TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.neg_time_agnostic = 2;
  cfg.neg_time_dependent = 2;
  Adam adam(mc);
  GradientTables grads = GradientTables::allocate(mc);
  auto batch = make_batch(sampler, kg.quadruples(), cfg, 0, Rng(1));
  CHECK_THROWS_WITH_AS(train_step(params, adam, grads, &index, batch, cfg, 0),
                       doctest::Contains("non-finite"), std::runtime_error);
}

TEST_CASE("a tiny KG overfits quickly") {
  auto kg = training_kg(2, 3, 8, 6, 33);
  DatasetSplit split;
  split.train = kg.quadruples();
  ModelConfig mc;
  mc.kind = ModelKind::de_rotate;
  mc.num_entities = static_cast<std::int32_t>(kg.num_entities());
  mc.num_relations = static_cast<std::int32_t>(kg.num_relations());
  mc.static_dim = 8;
  mc.diachronic_dim = 8;
  mc.relative_dim = 0;

  TrainConfig cfg;
  cfg.batch_size = 8;
  cfg.neg_time_agnostic = 4;
  cfg.neg_time_dependent = 2;
  cfg.learning_rate = 0.05;
  cfg.warmup_steps = 1000000;
  cfg.l3_lambda = 0.0;
  cfg.dropout = 0.0;
  cfg.total_steps = 300;
  cfg.validation_every = 0;
  cfg.seed = 7;

  auto result = train_loop(kg, split, mc, cfg);
  CHECK(result.log.front().loss > 0);
  CHECK(result.log.back().loss < 0.2 * result.log.front().loss);
}

TEST_CASE("train_loop with zero steps returns the initial params") {
  auto kg = training_kg(3, 3, 12, 5, 44);
  DatasetSplit split;
  split.train = kg.quadruples();
  ModelConfig mc;
  mc.kind = ModelKind::de_rotate;
  mc.num_entities = static_cast<std::int32_t>(kg.num_entities());
  mc.num_relations = static_cast<std::int32_t>(kg.num_relations());
  mc.static_dim = 4;
  mc.diachronic_dim = 4;
  mc.relative_dim = 0;
  TrainConfig cfg;
  cfg.total_steps = 0;
  cfg.validation_every = 0;
  cfg.seed = 5;
  auto result = train_loop(kg, split, mc, cfg);
  auto init = ModelParams::init(mc, Rng(5));
  CHECK(result.params.entity_static == init.entity_static);
  CHECK(result.log.empty());
}

TEST_CASE("selection without a validation set is an error") {
  auto kg = training_kg(3, 3, 12, 5, 45);
  DatasetSplit split;
  split.train = kg.quadruples();
  ModelConfig mc;
  mc.kind = ModelKind::de_rotate;
  mc.num_entities = static_cast<std::int32_t>(kg.num_entities());
  mc.num_relations = static_cast<std::int32_t>(kg.num_relations());
  mc.static_dim = 4;
  mc.diachronic_dim = 4;
  mc.relative_dim = 0;
  TrainConfig cfg;
  cfg.total_steps = 2;
  cfg.validation_every = 1;
  CHECK_THROWS_AS(train_loop(kg, split, mc, cfg), std::invalid_argument);
}

TEST_CASE("training is reproducible for a fixed seed") {
  auto kg = training_kg(4, 5, 30, 8, 55);
  DatasetSplit split;
  split.train.assign(kg.quadruples().begin(), kg.quadruples().end() - 4);
  split.validation.assign(kg.quadruples().end() - 4, kg.quadruples().end());
  ModelConfig mc;
  mc.kind = ModelKind::rt_de_rotate;
  mc.num_entities = static_cast<std::int32_t>(kg.num_entities());
  mc.num_relations = static_cast<std::int32_t>(kg.num_relations());
  mc.static_dim = 4;
  mc.diachronic_dim = 4;
  mc.relative_dim = 4;
  TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.neg_time_agnostic = 3;
  cfg.neg_time_dependent = 2;
  cfg.learning_rate = 0.01;
  cfg.total_steps = 20;
  cfg.validation_every = 5;
  cfg.seed = 99;
  cfg.dropout = 0.2;
  auto a = train_loop(kg, split, mc, cfg);
  auto b = train_loop(kg, split, mc, cfg);
  CHECK(a.best_step == b.best_step);
  CHECK(a.best_validation_mrr == b.best_validation_mrr);
  CHECK(a.final_params.entity_static == b.final_params.entity_static);
  CHECK(a.final_params.relation_importance == b.final_params.relation_importance);
  for (std::size_t i = 0; i < a.log.size(); ++i) CHECK(a.log[i].loss == b.log[i].loss);
}
