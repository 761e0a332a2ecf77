// Training: typed negative sampling, self-adversarial margin loss, L3
// regularization, and Adam with lazy per-row updates.
//
// Every stochastic choice is drawn from sub-streams of one seed, keyed by
// step and batch slot, so batches are reproducible and independent of the
// worker count used to score them (gradient merge order is fixed by chunk).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "tkge/context.hpp"
#include "tkge/eval.hpp"
#include "tkge/gradients.hpp"
#include "tkge/graph.hpp"
#include "tkge/model.hpp"
#include "tkge/parallel.hpp"
#include "tkge/rng.hpp"
#include "tkge/splits.hpp"

namespace tkge::train {

struct TrainConfig {
  double adversarial_temperature = 0.5;  // eta
  double margin = 6.0;                   // omega
  double learning_rate = 3e-5;           // alpha
  double l3_lambda = 5e-4;               // lambda
  double dropout = 0.4;
  int neg_time_agnostic = 256;
  int neg_time_dependent = 32;
  int batch_size = 64;
  std::uint64_t warmup_steps = 100000;
  double warmup_decay = 0.1;
  std::uint64_t total_steps = 200000;
  std::uint64_t validation_every = 10000;  // 0 disables model selection
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const {
    if (adversarial_temperature <= 0) throw std::invalid_argument("TrainConfig: eta must be > 0");
    if (margin <= 0) throw std::invalid_argument("TrainConfig: omega must be > 0");
    if (dropout < 0 || dropout >= 1) throw std::invalid_argument("TrainConfig: dropout in [0, 1)");
    if (batch_size <= 0) throw std::invalid_argument("TrainConfig: batch_size must be positive");
    if (neg_time_agnostic < 0 || neg_time_dependent < 0) {
      throw std::invalid_argument("TrainConfig: negative ratios must be non-negative");
    }
    if (learning_rate <= 0) throw std::invalid_argument("TrainConfig: alpha must be > 0");
    if (l3_lambda < 0) throw std::invalid_argument("TrainConfig: lambda must be >= 0");
  }
};

// Softmax over eta * f with max subtraction; the result is treated as
// constant during backprop. For distance-based models pass f = -distance.
inline std::vector<double> adversarial_weights(std::span<const double> f, double eta) {
  std::vector<double> w(f.size());
  if (f.empty()) return w;
  double fmax = f[0];
  for (double v : f) fmax = std::max(fmax, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    w[i] = std::exp(eta * (f[i] - fmax));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

namespace detail {

inline double softplus(double x) {
  // log(1 + e^x), stable for large |x|
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

// Self-adversarial margin loss:
//   -log sigma(omega - d_pos) - sum_i w_i log sigma(d_i - omega).
inline double loss(double pos_distance, std::span<const double> neg_distances,
                   std::span<const double> weights, double omega) {
  double total = detail::softplus(pos_distance - omega);
  for (std::size_t i = 0; i < neg_distances.size(); ++i) {
    total += weights[i] * detail::softplus(omega - neg_distances[i]);
  }
  return total;
}

// lambda * sum |w|^3 over exactly E, E_A, W_E, W_P.
inline double l3_penalty(const ModelParams& p, double lambda) {
  if (lambda == 0.0) return 0.0;
  double total = 0.0;
  auto cube = [&total](const std::vector<double>& t) {
    for (double w : t) {
      double a = std::abs(w);
      total += a * a * a;
    }
  };
  cube(p.entity_static);
  cube(p.entity_amplitude);
  cube(p.time_projection);
  cube(p.relation_importance);
  return lambda * total;
}

// d/dw of lambda |w|^3 = 3 lambda w |w|; touches every row of the four
// regularized tables.
inline void add_l3_gradient(const ModelParams& p, double lambda, GradientTables& g) {
  if (lambda == 0.0) return;
  auto add = [lambda](const std::vector<double>& w, std::vector<double>& out) {
    for (std::size_t i = 0; i < w.size(); ++i) out[i] += 3.0 * lambda * w[i] * std::abs(w[i]);
  };
  add(p.entity_static, g.entity_static);
  add(p.entity_amplitude, g.entity_amplitude);
  add(p.time_projection, g.time_projection);
  add(p.relation_importance, g.relation_importance);
  std::fill(g.entity_touched.begin(), g.entity_touched.end(), 1);
  std::fill(g.relation_touched.begin(), g.relation_touched.end(), 1);
  if (!g.time_projection.empty()) g.projection_touched = true;
}

// Typed negative generation with filtered sampling against known positives.
class NegativeSampler {
 public:
  NegativeSampler(const TemporalKG& kg, std::span<const Quadruple> train_tuples)
      : kg_(&kg) {
    for (const Quadruple& q : train_tuples) {
      positives_.insert(q);
      tmin_ = positives_.size() == 1 ? q.t : std::min(tmin_, q.t);
      tmax_ = positives_.size() == 1 ? q.t : std::max(tmax_, q.t);
    }
  }

  Timestamp train_tmin() const { return tmin_; }
  Timestamp train_tmax() const { return tmax_; }
  std::uint64_t untyped_fallbacks() const { return untyped_fallbacks_; }

  // Appends neg_time_agnostic entity-corrupted and neg_time_dependent
  // time-corrupted negatives for one positive. Entity corruption replaces
  // s or o (coin flip) with a uniform same-type entity; when the type has a
  // single member it falls back to untyped corruption (counted). Time
  // corruption draws a uniform timestamp in the train range different from
  // the true t. Accidental collisions with known positives are resampled up
  // to kRetryCap times, then accepted.
  void sample(const Quadruple& positive, const TrainConfig& cfg, Rng& rng,
              std::vector<Quadruple>& out) {
    for (int i = 0; i < cfg.neg_time_agnostic; ++i) out.push_back(entity_negative(positive, rng));
    if (cfg.neg_time_dependent > 0 && tmax_ == tmin_) {
      throw std::runtime_error("NegativeSampler: train split spans one day, time-dependent negatives impossible");
    }
    for (int i = 0; i < cfg.neg_time_dependent; ++i) out.push_back(time_negative(positive, rng));
  }

 private:
  static constexpr int kRetryCap = 100;

  Quadruple entity_negative(const Quadruple& positive, Rng& rng) {
    Quadruple neg = positive;
    const bool corrupt_subject = rng.coin();
    const EntityId original = corrupt_subject ? positive.subject : positive.object;
    const auto& typed = kg_->entities_of_type(kg_->entity_type(original));
    const bool untyped = typed.size() < 2;
    if (untyped) ++untyped_fallbacks_;
    const std::size_t n_all = kg_->num_entities();
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
      EntityId candidate = untyped
                               ? static_cast<EntityId>(rng.next_below(n_all))
                               : typed[static_cast<std::size_t>(rng.next_below(typed.size()))];
      if (candidate == original) continue;
      (corrupt_subject ? neg.subject : neg.object) = candidate;
      if (!positives_.count(neg)) return neg;
    }
    return neg;  // retry cap reached: accept the collision
  }

  Quadruple time_negative(const Quadruple& positive, Rng& rng) {
    Quadruple neg = positive;
    const std::uint64_t span = static_cast<std::uint64_t>(tmax_ - tmin_) + 1;
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
      Timestamp candidate = tmin_ + static_cast<Timestamp>(rng.next_below(span));
      if (candidate == positive.t) continue;
      neg.t = candidate;
      if (!positives_.count(neg)) return neg;
    }
    if (neg.t == positive.t) neg.t = (positive.t == tmin_) ? tmax_ : tmin_;
    return neg;
  }

  const TemporalKG* kg_;
  std::unordered_set<Quadruple, QuadrupleHash> positives_;
  Timestamp tmin_ = 0;
  Timestamp tmax_ = 0;
  std::uint64_t untyped_fallbacks_ = 0;
};

// Convenience wrapper matching the one-shot contract; trainers keep a
// NegativeSampler instead of rebuilding the positive set per call.
inline std::vector<Quadruple> sample_negatives(const TemporalKG& kg, const Quadruple& positive,
                                               const TrainConfig& cfg, Rng& rng) {
  NegativeSampler sampler(kg, kg.quadruples());
  std::vector<Quadruple> out;
  sampler.sample(positive, cfg, rng, out);
  return out;
}

// One training batch. Negatives are stored flat per positive: first the
// entity-corrupted block, then the time-corrupted block. mask_seed drives
// the per-example dropout masks (regenerated on demand to keep the batch
// small); 0 means no dropout.
struct Batch {
  std::vector<Quadruple> positives;
  std::vector<Quadruple> negatives;  // positives.size() * negs_per_positive
  std::vector<std::uint64_t> mask_seeds;
  int neg_entity = 0;
  int neg_time = 0;

  int negs_per_positive() const { return neg_entity + neg_time; }
  std::span<const Quadruple> negatives_of(std::size_t i) const {
    return {negatives.data() + i * static_cast<std::size_t>(negs_per_positive()),
            static_cast<std::size_t>(negs_per_positive())};
  }
};

// Draws positives uniformly and generates their negatives and mask seeds.
// Per-positive randomness is keyed by (step, slot), not by call order.
inline Batch make_batch(NegativeSampler& sampler, std::span<const Quadruple> train,
                        const TrainConfig& cfg, std::uint64_t step, const Rng& root) {
  if (train.empty()) throw std::invalid_argument("make_batch: empty train split");
  Batch batch;
  batch.neg_entity = cfg.neg_time_agnostic;
  batch.neg_time = cfg.neg_time_dependent;
  Rng pos_rng = root.stream("positives").stream(step);
  Rng neg_base = root.stream("negatives");
  Rng mask_base = root.stream("dropout");
  const std::uint64_t b = static_cast<std::uint64_t>(cfg.batch_size);
  batch.positives.reserve(b);
  batch.negatives.reserve(b * static_cast<std::size_t>(batch.negs_per_positive()));
  batch.mask_seeds.assign(b, 0);
  for (std::uint64_t i = 0; i < b; ++i) {
    const Quadruple& pos = train[static_cast<std::size_t>(pos_rng.next_below(train.size()))];
    batch.positives.push_back(pos);
    Rng neg_rng = neg_base.stream(step * b + i);
    sampler.sample(pos, cfg, neg_rng, batch.negatives);
    if (cfg.dropout > 0.0) batch.mask_seeds[i] = mask_base.stream(step * b + i).seed();
  }
  return batch;
}

namespace detail {

// Regenerates the dropout masks of one scored example. Example 0 is the
// positive, 1.. are its negatives in batch order.
inline void draw_masks(const ModelConfig& cfg, double rate, std::uint64_t mask_seed,
                       std::size_t example, DropoutMasks& out) {
  Rng rng = Rng(mask_seed).stream(example);
  out = DropoutMasks::draw(cfg, rate, rng);
}

}  // namespace detail

// Mean self-adversarial loss over the batch plus the L3 penalty. When grads
// is non-null, accumulates d(objective)/d(theta) into it. Deterministic for
// a fixed batch, including the dropout masks.
//
// The adversarial weights are detached: backprop treats them as constants.
// frozen_weights (n_pos x negs_per_positive, flattened) pins them to given
// values instead of recomputing from the current scores; the
// finite-difference oracle uses this to differentiate the same detached
// objective the backward pass implements.
inline double batch_objective(const ModelParams& params, const RelativeContextIndex* index,
                              const Batch& batch, const TrainConfig& cfg,
                              GradientTables* grads, int workers = 1,
                              const std::vector<double>* frozen_weights = nullptr) {
  const std::size_t n_pos = batch.positives.size();
  const std::size_t n_neg = static_cast<std::size_t>(batch.negs_per_positive());
  const double inv_b = 1.0 / static_cast<double>(n_pos);
  const bool dropout = cfg.dropout > 0.0;

  struct ChunkOut {
    double loss_sum = 0.0;
    std::unique_ptr<GradientTables> grads;
  };
  const std::size_t n_chunks =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n_pos));
  std::vector<ChunkOut> chunks(n_chunks);
  const std::size_t chunk_size = (n_pos + n_chunks - 1) / n_chunks;

  parallel_for(n_chunks, static_cast<int>(n_chunks), [&](std::size_t cb, std::size_t ce) {
    for (std::size_t ci = cb; ci < ce; ++ci) {
      ChunkOut& out = chunks[ci];
      if (grads) out.grads = std::make_unique<GradientTables>(GradientTables::allocate(params.config));
      ScoreScratch ws(params.config);
      DropoutMasks masks;
      std::vector<double> neg_d(n_neg), neg_f(n_neg);
      const std::size_t begin = ci * chunk_size;
      const std::size_t end = std::min(n_pos, begin + chunk_size);
      for (std::size_t i = begin; i < end; ++i) {
        const Quadruple& pos = batch.positives[i];
        const Timestamp t_q = pos.t;  // training rule: t_q is the positive's own t
        auto negs = batch.negatives_of(i);

        const DropoutMasks* pos_masks = nullptr;
        if (dropout) {
          detail::draw_masks(params.config, cfg.dropout, batch.mask_seeds[i], 0, masks);
          pos_masks = &masks;
        }
        const double d_pos = translational_score(params, index, pos.subject, pos.relation,
                                                 pos.object, pos.t, t_q, pos_masks, ws);
        DropoutMasks neg_masks;
        for (std::size_t j = 0; j < n_neg; ++j) {
          const DropoutMasks* nm = nullptr;
          if (dropout) {
            detail::draw_masks(params.config, cfg.dropout, batch.mask_seeds[i], j + 1, neg_masks);
            nm = &neg_masks;
          }
          neg_d[j] = translational_score(params, index, negs[j].subject, negs[j].relation,
                                         negs[j].object, negs[j].t, t_q, nm, ws);
          neg_f[j] = -neg_d[j];
        }
        std::vector<double> weights;
        if (frozen_weights) {
          weights.assign(frozen_weights->begin() + static_cast<std::ptrdiff_t>(i * n_neg),
                         frozen_weights->begin() + static_cast<std::ptrdiff_t>((i + 1) * n_neg));
        } else {
          weights = adversarial_weights(neg_f, cfg.adversarial_temperature);
        }
        out.loss_sum += loss(d_pos, neg_d, weights, cfg.margin);

        if (out.grads) {
          const double coeff_pos = detail::sigmoid(d_pos - cfg.margin) * inv_b;
          translational_score_backward(params, index, pos.subject, pos.relation, pos.object,
                                       pos.t, t_q, coeff_pos, pos_masks, ws, *out.grads);
          for (std::size_t j = 0; j < n_neg; ++j) {
            const DropoutMasks* nm = nullptr;
            if (dropout) {
              detail::draw_masks(params.config, cfg.dropout, batch.mask_seeds[i], j + 1, neg_masks);
              nm = &neg_masks;
            }
            const double coeff_neg = -weights[j] * detail::sigmoid(cfg.margin - neg_d[j]) * inv_b;
            translational_score_backward(params, index, negs[j].subject, negs[j].relation,
                                         negs[j].object, negs[j].t, t_q, coeff_neg, nm, ws,
                                         *out.grads);
          }
        }
      }
    }
  });

  double total = 0.0;
  for (auto& c : chunks) {
    total += c.loss_sum;
    if (grads && c.grads) grads->add_scaled(*c.grads, 1.0);
  }
  total *= inv_b;
  total += l3_penalty(params, cfg.l3_lambda);
  if (grads) add_l3_gradient(params, cfg.l3_lambda, *grads);
  return total;
}

// Adversarial weights of every negative in the batch at the current
// parameters, flattened n_pos x negs_per_positive.
inline std::vector<double> collect_adversarial_weights(const ModelParams& params,
                                                       const RelativeContextIndex* index,
                                                       const Batch& batch,
                                                       const TrainConfig& cfg) {
  const std::size_t n_pos = batch.positives.size();
  const std::size_t n_neg = static_cast<std::size_t>(batch.negs_per_positive());
  std::vector<double> out(n_pos * n_neg);
  ScoreScratch ws(params.config);
  DropoutMasks masks;
  std::vector<double> neg_f(n_neg);
  const bool dropout = cfg.dropout > 0.0;
  for (std::size_t i = 0; i < n_pos; ++i) {
    const Timestamp t_q = batch.positives[i].t;
    auto negs = batch.negatives_of(i);
    for (std::size_t j = 0; j < n_neg; ++j) {
      const DropoutMasks* nm = nullptr;
      if (dropout) {
        detail::draw_masks(params.config, cfg.dropout, batch.mask_seeds[i], j + 1, masks);
        nm = &masks;
      }
      neg_f[j] = -translational_score(params, index, negs[j].subject, negs[j].relation,
                                      negs[j].object, negs[j].t, t_q, nm, ws);
    }
    auto w = adversarial_weights(neg_f, cfg.adversarial_temperature);
    std::copy(w.begin(), w.end(), out.begin() + static_cast<std::ptrdiff_t>(i * n_neg));
  }
  return out;
}

// Adam with lazy per-row moment updates: only rows touched by the current
// gradient (which is all regularized rows when lambda > 0) are decayed and
// stepped. Bias correction uses the global step count.
class Adam {
 public:
  explicit Adam(const ModelConfig& cfg, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps),
        m_(GradientTables::allocate(cfg)), v_(GradientTables::allocate(cfg)) {}

  void apply(ModelParams& params, const GradientTables& g, double lr, std::uint64_t step1) {
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step1));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step1));
    const double scale = lr * std::sqrt(bc2) / bc1;

    auto update_range = [&](std::vector<double>& w, const std::vector<double>& grad,
                            std::vector<double>& m, std::vector<double>& v, std::size_t begin,
                            std::size_t count) {
      for (std::size_t i = begin; i < begin + count; ++i) {
        const double gi = grad[i];
        m[i] = beta1_ * m[i] + (1.0 - beta1_) * gi;
        v[i] = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
        w[i] -= scale * m[i] / (std::sqrt(v[i]) + eps_);
      }
    };

    const auto& cfg = params.config;
    const std::size_t ds = static_cast<std::size_t>(cfg.static_dim);
    const std::size_t dt = static_cast<std::size_t>(cfg.diachronic_dim);
    const std::size_t np = static_cast<std::size_t>(cfg.num_pairs());
    const std::size_t nr = static_cast<std::size_t>(cfg.num_relations);
    for (std::size_t e = 0; e < g.entity_touched.size(); ++e) {
      if (!g.entity_touched[e]) continue;
      update_range(params.entity_static, g.entity_static, m_.entity_static, v_.entity_static,
                   e * ds, ds);
      if (dt > 0) {
        update_range(params.entity_amplitude, g.entity_amplitude, m_.entity_amplitude,
                     v_.entity_amplitude, e * dt, dt);
        update_range(params.entity_frequency, g.entity_frequency, m_.entity_frequency,
                     v_.entity_frequency, e * dt, dt);
        update_range(params.entity_phase, g.entity_phase, m_.entity_phase, v_.entity_phase,
                     e * dt, dt);
      }
    }
    for (std::size_t r = 0; r < g.relation_touched.size(); ++r) {
      if (!g.relation_touched[r]) continue;
      if (!params.relation_phase.empty()) {
        update_range(params.relation_phase, g.relation_phase, m_.relation_phase,
                     v_.relation_phase, r * np, np);
      }
      if (!params.relation_importance.empty()) {
        update_range(params.relation_importance, g.relation_importance, m_.relation_importance,
                     v_.relation_importance, r * nr, nr);
      }
    }
    if (g.projection_touched && !params.time_projection.empty()) {
      update_range(params.time_projection, g.time_projection, m_.time_projection,
                   v_.time_projection, 0, params.time_projection.size());
    }
  }

 private:
  double beta1_, beta2_, eps_;
  GradientTables m_, v_;
};

inline double learning_rate_at(const TrainConfig& cfg, std::uint64_t step) {
  return step >= cfg.warmup_steps ? cfg.learning_rate * cfg.warmup_decay : cfg.learning_rate;
}

// One optimization step; returns the batch objective. Throws on a non-finite
// loss with the step in the message.
inline double train_step(ModelParams& params, Adam& adam, GradientTables& grads,
                         const RelativeContextIndex* index, const Batch& batch,
                         const TrainConfig& cfg, std::uint64_t step) {
  grads.clear();
  const double objective = batch_objective(params, index, batch, cfg, &grads, cfg.workers);
  if (!std::isfinite(objective)) {
    throw std::runtime_error("train_step: non-finite loss " + std::to_string(objective) +
                             " at step " + std::to_string(step));
  }
  adam.apply(params, grads, learning_rate_at(cfg, step), step + 1);
  return objective;
}

struct LogRow {
  std::uint64_t step = 0;
  double loss = 0.0;
  double validation_mrr = -1.0;  // < 0 when not evaluated at this step
};

struct EvalPlan {
  eval::UnknownSlot slot = eval::UnknownSlot::object;
  std::unordered_set<RelationId> relations;  // empty = all
};

struct TrainResult {
  ModelParams params;        // best by validation MRR, or final when selection is off
  ModelParams final_params;
  std::uint64_t best_step = 0;
  double best_validation_mrr = -1.0;
  std::vector<LogRow> log;
  std::uint64_t rng_state = 0;
};

// Full training loop. Training facts are split.train, plus split.validation
// when include_validation is set (the retrained extrapolated protocol).
// Validation MRR is link-prediction MRR under the same re-ranking heuristics
// used at test time; the best checkpoint by validation MRR is kept.
inline TrainResult train_loop(const TemporalKG& kg, const DatasetSplit& split,
                              const ModelConfig& model_cfg, const TrainConfig& cfg,
                              bool include_validation = false, const EvalPlan& plan = {}) {
  cfg.validate();
  model_cfg.validate();
  if (model_cfg.kind == ModelKind::rt_bilinear) {
    throw std::invalid_argument("train_loop: bilinear mode is scoring-only");
  }
  std::vector<Quadruple> effective_train = split.train;
  if (include_validation) {
    effective_train.insert(effective_train.end(), split.validation.begin(),
                           split.validation.end());
  }
  if (effective_train.empty()) throw std::invalid_argument("train_loop: empty train split");
  const bool selecting = cfg.validation_every > 0 && cfg.total_steps > 0;
  if (selecting && split.validation.empty()) {
    throw std::invalid_argument("train_loop: model selection enabled but validation set is empty");
  }

  RelativeContextIndex index(effective_train);
  NegativeSampler sampler(kg, effective_train);
  Rng root(cfg.seed);
  ModelParams params = ModelParams::init(model_cfg, root);
  Adam adam(model_cfg);
  GradientTables grads = GradientTables::allocate(model_cfg);

  eval::InteractionIndex interactions(effective_train);
  Timestamp t_q = sampler.train_tmax();
  auto validation_mrr = [&]() {
    eval::EvalContext ctx;
    ctx.kg = &kg;
    ctx.params = &params;
    ctx.index = &index;
    ctx.interactions = &interactions;
    ctx.opts.t_q = t_q;
    ctx.opts.workers = cfg.workers;
    auto queries = eval::build_link_queries(split.validation, plan.slot,
                                            plan.relations.empty() ? nullptr : &plan.relations);
    if (queries.empty()) return -1.0;
    return eval::evaluate(ctx, queries).metrics.mrr;
  };

  TrainResult result;
  result.params = params;
  for (std::uint64_t step = 0; step < cfg.total_steps; ++step) {
    Batch batch = make_batch(sampler, effective_train, cfg, step, root);
    const double objective = train_step(params, adam, grads, &index, batch, cfg, step);
    LogRow row{step, objective, -1.0};
    if (selecting && (step + 1) % cfg.validation_every == 0) {
      row.validation_mrr = validation_mrr();
      if (row.validation_mrr > result.best_validation_mrr) {
        result.best_validation_mrr = row.validation_mrr;
        result.best_step = step + 1;
        result.params = params;
      }
    }
    result.log.push_back(row);
  }
  result.final_params = params;
  if (!selecting || result.best_validation_mrr < 0) {
    result.params = params;
    result.best_step = cfg.total_steps;
  }
  result.rng_state = root.state();
  return result;
}

}  // namespace tkge::train
