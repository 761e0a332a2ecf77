// Analytic gradients for the translational scoring functions.
//
// The backward pass mirrors the forward term by term. L1 distances use the
// sign subgradient (zero exactly at kinks); the complex-modulus terms use
// re/|z|, im/|z|. Gradients accumulate into dense per-table buffers with
// touched-row tracking so the optimizer can update lazily.

#pragma once

#include <cmath>
#include <cstring>
#include <vector>

#include "tkge/context.hpp"
#include "tkge/encoding.hpp"
#include "tkge/model.hpp"
#include "tkge/rng.hpp"

namespace tkge {

struct GradientTables {
  ModelConfig config;
  std::vector<double> entity_static;
  std::vector<double> entity_amplitude;
  std::vector<double> entity_frequency;
  std::vector<double> entity_phase;
  std::vector<double> relation_phase;
  std::vector<double> time_projection;
  std::vector<double> relation_importance;

  std::vector<std::uint8_t> entity_touched;
  std::vector<std::uint8_t> relation_touched;
  bool projection_touched = false;

  static GradientTables allocate(const ModelConfig& cfg) {
    GradientTables g;
    g.config = cfg;
    ModelParams shape = ModelParams::allocate(cfg);
    g.entity_static.assign(shape.entity_static.size(), 0.0);
    g.entity_amplitude.assign(shape.entity_amplitude.size(), 0.0);
    g.entity_frequency.assign(shape.entity_frequency.size(), 0.0);
    g.entity_phase.assign(shape.entity_phase.size(), 0.0);
    g.relation_phase.assign(shape.relation_phase.size(), 0.0);
    g.time_projection.assign(shape.time_projection.size(), 0.0);
    g.relation_importance.assign(shape.relation_importance.size(), 0.0);
    g.entity_touched.assign(static_cast<std::size_t>(cfg.num_entities), 0);
    g.relation_touched.assign(static_cast<std::size_t>(cfg.num_relations), 0);
    return g;
  }

  void touch_entity(EntityId e) { entity_touched[static_cast<std::size_t>(e)] = 1; }
  void touch_relation(RelationId r) { relation_touched[static_cast<std::size_t>(r)] = 1; }

  // Zeroes only what was touched.
  void clear() {
    const std::size_t ds = static_cast<std::size_t>(config.static_dim);
    const std::size_t dt = static_cast<std::size_t>(config.diachronic_dim);
    const std::size_t np = static_cast<std::size_t>(config.num_pairs());
    for (std::size_t e = 0; e < entity_touched.size(); ++e) {
      if (!entity_touched[e]) continue;
      std::memset(entity_static.data() + e * ds, 0, ds * sizeof(double));
      if (dt > 0) {
        std::memset(entity_amplitude.data() + e * dt, 0, dt * sizeof(double));
        std::memset(entity_frequency.data() + e * dt, 0, dt * sizeof(double));
        std::memset(entity_phase.data() + e * dt, 0, dt * sizeof(double));
      }
      entity_touched[e] = 0;
    }
    for (std::size_t r = 0; r < relation_touched.size(); ++r) {
      if (!relation_touched[r]) continue;
      if (!relation_phase.empty()) {
        std::memset(relation_phase.data() + r * np, 0, np * sizeof(double));
      }
      if (!relation_importance.empty()) {
        std::memset(relation_importance.data() + r * relation_touched.size(), 0,
                    relation_touched.size() * sizeof(double));
      }
      relation_touched[r] = 0;
    }
    if (projection_touched) {
      std::memset(time_projection.data(), 0, time_projection.size() * sizeof(double));
      projection_touched = false;
    }
  }

  void add_scaled(const GradientTables& other, double scale) {
    auto add = [scale](std::vector<double>& dst, const std::vector<double>& src) {
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
    };
    add(entity_static, other.entity_static);
    add(entity_amplitude, other.entity_amplitude);
    add(entity_frequency, other.entity_frequency);
    add(entity_phase, other.entity_phase);
    add(relation_phase, other.relation_phase);
    add(time_projection, other.time_projection);
    add(relation_importance, other.relation_importance);
    for (std::size_t i = 0; i < entity_touched.size(); ++i) entity_touched[i] |= other.entity_touched[i];
    for (std::size_t i = 0; i < relation_touched.size(); ++i) relation_touched[i] |= other.relation_touched[i];
    projection_touched = projection_touched || other.projection_touched;
  }
};

// Inverted dropout masks for one scored tuple: entries are 0 or 1/(1-rate).
// Masks cover the two diachronic vectors and the two gamma vectors, the only
// places dropout applies.
struct DropoutMasks {
  std::vector<double> d_subject;
  std::vector<double> d_object;
  std::vector<double> gamma_subject;
  std::vector<double> gamma_object;

  static DropoutMasks draw(const ModelConfig& cfg, double rate, Rng& rng) {
    DropoutMasks m;
    const double keep = 1.0 - rate;
    auto fill = [&](std::vector<double>& v, std::size_t n) {
      v.resize(n);
      for (auto& x : v) x = (rng.next_double() < keep) ? 1.0 / keep : 0.0;
    };
    fill(m.d_subject, static_cast<std::size_t>(cfg.base_dim()));
    fill(m.d_object, static_cast<std::size_t>(cfg.base_dim()));
    fill(m.gamma_subject, static_cast<std::size_t>(cfg.relative_dim));
    fill(m.gamma_object, static_cast<std::size_t>(cfg.relative_dim));
    return m;
  }
};

// Reusable buffers for one scoring thread.
struct ScoreScratch {
  PositionalEncoder encoder;
  std::vector<double> d_subj, d_obj;       // masked diachronic vectors
  std::vector<double> gamma_subj, gamma_obj;
  std::vector<double> proj_subj, proj_obj;  // E(x) W_E
  std::vector<double> p_subj, p_obj;        // |R| x d_r positional matrices
  std::vector<std::uint8_t> p_subj_set, p_obj_set;

  explicit ScoreScratch(const ModelConfig& cfg)
      : encoder(cfg.relative_dim),
        d_subj(static_cast<std::size_t>(cfg.base_dim())),
        d_obj(static_cast<std::size_t>(cfg.base_dim())),
        gamma_subj(static_cast<std::size_t>(cfg.relative_dim)),
        gamma_obj(static_cast<std::size_t>(cfg.relative_dim)),
        proj_subj(static_cast<std::size_t>(cfg.relative_dim)),
        proj_obj(static_cast<std::size_t>(cfg.relative_dim)),
        p_subj(static_cast<std::size_t>(cfg.num_relations) * cfg.relative_dim),
        p_obj(static_cast<std::size_t>(cfg.num_relations) * cfg.relative_dim),
        p_subj_set(static_cast<std::size_t>(cfg.num_relations)),
        p_obj_set(static_cast<std::size_t>(cfg.num_relations)) {}
};

namespace detail {

// Builds the positional matrix P(e, t, t_q) into `rows` (|R| x d_r) and the
// per-row history flags into `set`.
inline void fill_p_matrix(const ModelParams& p, const RelativeContextIndex& index, EntityId e,
                          Timestamp t, Timestamp t_q, const PositionalEncoder& enc,
                          std::span<double> rows, std::span<std::uint8_t> set) {
  const std::size_t dr = static_cast<std::size_t>(p.config.relative_dim);
  for (RelationId rp = 0; rp < p.config.num_relations; ++rp) {
    auto delta = index.delta(e, rp, t_q);
    set[static_cast<std::size_t>(rp)] = delta.has_value() ? 1 : 0;
    if (!delta) continue;
    enc.fill(static_cast<double>(t) - static_cast<double>(t_q) + static_cast<double>(*delta),
             rows.subspan(static_cast<std::size_t>(rp) * dr, dr));
  }
}

// gamma from a prebuilt P matrix, with an optional dropout mask.
inline void gamma_from_p(const ModelParams& p, RelationId r, std::span<const double> rows,
                         std::span<const std::uint8_t> set, const std::vector<double>* mask,
                         std::span<double> out) {
  const std::size_t dr = static_cast<std::size_t>(p.config.relative_dim);
  std::fill(out.begin(), out.end(), 0.0);
  auto weights = p.importance_row(r);
  for (std::size_t rp = 0; rp < set.size(); ++rp) {
    if (!set[rp]) continue;
    const double w = weights[rp];
    if (w == 0.0) continue;
    const double* row = rows.data() + rp * dr;
    for (std::size_t j = 0; j < dr; ++j) out[j] += w * row[j];
  }
  if (mask) {
    for (std::size_t j = 0; j < dr; ++j) out[j] *= (*mask)[j];
  }
}

inline void masked_diachronic(const ModelParams& p, EntityId e, Timestamp t,
                              const std::vector<double>* mask, std::span<double> out) {
  diachronic_embed(p, e, t, out);
  if (mask) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= (*mask)[i];
  }
}

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

// Forward pass for the translational kinds with optional dropout masks.
// Populates the scratch buffers as a side effect.
inline double translational_score(const ModelParams& p, const RelativeContextIndex* index,
                                  EntityId s, RelationId r, EntityId o, Timestamp t,
                                  Timestamp t_q, const DropoutMasks* masks, ScoreScratch& ws) {
  detail::masked_diachronic(p, s, t, masks ? &masks->d_subject : nullptr, ws.d_subj);
  detail::masked_diachronic(p, o, t, masks ? &masks->d_object : nullptr, ws.d_obj);
  double total = rotation_distance(ws.d_subj, ws.d_obj, p.rotation_row(r));

  const std::size_t dr = static_cast<std::size_t>(p.config.relative_dim);
  if (p.config.kind != ModelKind::rt_de_rotate || dr == 0) return total;

  detail::fill_p_matrix(p, *index, s, t, t_q, ws.encoder, ws.p_subj, ws.p_subj_set);
  detail::fill_p_matrix(p, *index, o, t, t_q, ws.encoder, ws.p_obj, ws.p_obj_set);
  detail::gamma_from_p(p, r, ws.p_subj, ws.p_subj_set, masks ? &masks->gamma_subject : nullptr,
                       ws.gamma_subj);
  detail::gamma_from_p(p, r, ws.p_obj, ws.p_obj_set, masks ? &masks->gamma_object : nullptr,
                       ws.gamma_obj);
  fill_static_projection(p, s, ws.proj_subj);
  fill_static_projection(p, o, ws.proj_obj);
  total += l1_distance(ws.proj_subj, ws.gamma_obj);
  total += l1_distance(ws.gamma_subj, ws.proj_obj);
  return total;
}

// Accumulates coeff * d(score)/d(theta) into `g` for one scored tuple.
// Recomputes the forward internals, so it does not depend on scratch state.
inline double translational_score_backward(const ModelParams& p,
                                           const RelativeContextIndex* index, EntityId s,
                                           RelationId r, EntityId o, Timestamp t, Timestamp t_q,
                                           double coeff, const DropoutMasks* masks,
                                           ScoreScratch& ws, GradientTables& g) {
  const int ds = p.config.static_dim;
  const int dt = p.config.diachronic_dim;
  const std::size_t dr = static_cast<std::size_t>(p.config.relative_dim);
  const double score = translational_score(p, index, s, r, o, t, t_q, masks, ws);

  g.touch_entity(s);
  g.touch_entity(o);
  g.touch_relation(r);

  // Chains a gradient on masked D(e,t)[idx] back to the entity tables.
  auto into_entity = [&](EntityId e, int idx, double v, const std::vector<double>* mask) {
    if (mask) v *= (*mask)[static_cast<std::size_t>(idx)];
    if (v == 0.0) return;
    const std::size_t base = static_cast<std::size_t>(e);
    if (idx < ds) {
      g.entity_static[base * ds + static_cast<std::size_t>(idx)] += v;
      return;
    }
    const std::size_t q = static_cast<std::size_t>(idx - ds);
    const double f = p.entity_frequency[base * dt + q];
    const double ph = p.entity_phase[base * dt + q];
    const double cosarg = std::cos(static_cast<double>(t) * f + ph);
    g.entity_amplitude[base * dt + q] += v;
    g.entity_frequency[base * dt + q] += v * static_cast<double>(t) * cosarg;
    g.entity_phase[base * dt + q] += v * cosarg;
  };

  // Term (a): rotation distance between masked diachronic vectors.
  {
    auto phases = p.rotation_row(r);
    const std::vector<double>* ms = masks ? &masks->d_subject : nullptr;
    const std::vector<double>* mo = masks ? &masks->d_object : nullptr;
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const double a = ws.d_subj[2 * k], b = ws.d_subj[2 * k + 1];
      const double c = ws.d_obj[2 * k], d = ws.d_obj[2 * k + 1];
      const double cr = std::cos(phases[k]), sr = std::sin(phases[k]);
      const double re = a * cr - b * sr - c;
      const double im = a * sr + b * cr - d;
      const double m = std::sqrt(re * re + im * im);
      if (m < 1e-300) continue;
      const double gre = coeff * re / m;
      const double gim = coeff * im / m;
      into_entity(s, static_cast<int>(2 * k), gre * cr + gim * sr, ms);
      into_entity(s, static_cast<int>(2 * k + 1), -gre * sr + gim * cr, ms);
      into_entity(o, static_cast<int>(2 * k), -gre, mo);
      into_entity(o, static_cast<int>(2 * k + 1), -gim, mo);
      g.relation_phase[static_cast<std::size_t>(r) * phases.size() + k] +=
          gre * (-a * sr - b * cr) + gim * (a * cr - b * sr);
    }
  }

  if (p.config.kind != ModelKind::rt_de_rotate || dr == 0) return score;
  g.projection_touched = true;

  const std::vector<double>* mgs = masks ? &masks->gamma_subject : nullptr;
  const std::vector<double>* mgo = masks ? &masks->gamma_object : nullptr;

  // Term (b): || E(s) W_E - gamma(r, o) ||_1.
  // Term (c): || gamma(r, s) - E(o) W_E ||_1.
  // Both share the same structure; handled via a helper over (proj entity,
  // gamma entity, proj vector, gamma vector, P matrix of the gamma side).
  auto backward_pair = [&](EntityId proj_e, std::span<const double> proj,
                           std::span<const double> gam, std::span<const double> p_rows,
                           std::span<const std::uint8_t> p_set, const std::vector<double>* gmask) {
    auto proj_stat = p.static_row(proj_e);
    const std::size_t pbase = static_cast<std::size_t>(proj_e) * static_cast<std::size_t>(ds);
    for (std::size_t j = 0; j < dr; ++j) {
      const double sj = detail::sign(proj[j] - gam[j]) * coeff;
      if (sj == 0.0) continue;
      // into W_E and the projecting entity's static row
      for (int a = 0; a < ds; ++a) {
        g.time_projection[static_cast<std::size_t>(a) * dr + j] +=
            sj * proj_stat[static_cast<std::size_t>(a)];
        g.entity_static[pbase + static_cast<std::size_t>(a)] += sj * p.we(a, static_cast<int>(j));
      }
      // into W_P row r through gamma (mask applies inside gamma)
      const double gcoeff = -sj * (gmask ? (*gmask)[j] : 1.0);
      if (gcoeff != 0.0) {
        for (std::size_t rp = 0; rp < p_set.size(); ++rp) {
          if (!p_set[rp]) continue;
          g.relation_importance[static_cast<std::size_t>(r) * p_set.size() + rp] +=
              gcoeff * p_rows[rp * dr + j];
        }
      }
    }
  };

  backward_pair(s, ws.proj_subj, ws.gamma_obj, ws.p_obj, ws.p_obj_set, mgo);
  // Term (c) is || gamma_s - proj_o ||: since |x - y| is symmetric, the same
  // helper applies with the roles flipped (sign(proj - gamma) is then the
  // derivative with respect to the projection side, as before).
  backward_pair(o, ws.proj_obj, ws.gamma_subj, ws.p_subj, ws.p_subj_set, mgs);

  return score;
}

}  // namespace tkge
