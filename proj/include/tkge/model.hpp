// Embedding model: static + diachronic entity tables, unit-modulus relation
// rotations stored as phase angles, and relative-time context machinery.
//
// Three translational scoring functions form a strict reduction chain
// (shared parameters give bit-identical scores):
//
//   rotate:        || E(s) o rot(r) - E(o) ||          (d_t = 0, d_r = 0)
//   de_rotate:     || D(s,t) o rot(r) - D(o,t) ||      (d_r = 0)
//   rt_de_rotate:  term above
//                  + || E(s) W_E - gamma(r, o, t) ||
//                  + || gamma(r, s, t) - E(o) W_E ||
//
// where D(e,t) concatenates the static row with A + sin(t * F + phi), norms
// are L1 (sum of complex moduli for the rotation term, absolute values in
// relative-time space), and gamma(r,e,t) = W_P(r) * P(e,t,t_q) embeds the
// entity's relative temporal context. A bilinear variant is available as a
// scoring-only mode.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tkge/context.hpp"
#include "tkge/encoding.hpp"
#include "tkge/rng.hpp"
#include "tkge/types.hpp"

namespace tkge {

enum class ModelKind : std::uint8_t {
  rotate = 0,
  de_rotate = 1,
  rt_de_rotate = 2,
  rt_bilinear = 3,
};

inline std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::rotate: return "rotate";
    case ModelKind::de_rotate: return "de_rotate";
    case ModelKind::rt_de_rotate: return "rt_de_rotate";
    case ModelKind::rt_bilinear: return "rt_bilinear";
  }
  return "?";
}

inline std::optional<ModelKind> parse_model_kind(std::string_view s) {
  for (ModelKind k : {ModelKind::rotate, ModelKind::de_rotate, ModelKind::rt_de_rotate,
                      ModelKind::rt_bilinear}) {
    if (s == model_kind_name(k)) return k;
  }
  return std::nullopt;
}

struct ModelConfig {
  ModelKind kind = ModelKind::rt_de_rotate;
  std::int32_t num_entities = 0;
  std::int32_t num_relations = 0;
  int static_dim = 64;      // d_s
  int diachronic_dim = 64;  // d_t
  int relative_dim = 32;    // d_r

  int base_dim() const { return static_dim + diachronic_dim; }
  int num_pairs() const { return base_dim() / 2; }

  void validate() const {
    auto even = [](int d) { return d >= 0 && d % 2 == 0; };
    if (!even(static_dim) || !even(diachronic_dim) || !even(relative_dim)) {
      throw std::invalid_argument("ModelConfig: dimensions must be even and non-negative");
    }
    if (base_dim() <= 0) throw std::invalid_argument("ModelConfig: d_s + d_t must be positive");
    if (num_entities <= 0 || num_relations <= 0) {
      throw std::invalid_argument("ModelConfig: entity/relation counts must be positive");
    }
    if (kind == ModelKind::rotate && (diachronic_dim != 0 || relative_dim != 0)) {
      throw std::invalid_argument("ModelConfig: rotate requires d_t = 0 and d_r = 0");
    }
    if (kind == ModelKind::de_rotate && relative_dim != 0) {
      throw std::invalid_argument("ModelConfig: de_rotate requires d_r = 0");
    }
  }

  bool is_relative() const {
    return kind == ModelKind::rt_de_rotate || kind == ModelKind::rt_bilinear;
  }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Exact count of learnable scalars for a configuration.
//
// The translational relative-time model grows as
// (d_s + d_t)(|V| + |R|) + d_s d_r + |R|^2: the d_s d_r term is the W_E
// projection and the |R|^2 term the importance matrix. A d_r^2 table exists
// only in the bilinear variant (its context weight).
inline std::int64_t param_count(const ModelConfig& cfg) {
  cfg.validate();
  const std::int64_t V = cfg.num_entities;
  const std::int64_t R = cfg.num_relations;
  const std::int64_t ds = cfg.static_dim;
  const std::int64_t dt = cfg.diachronic_dim;
  const std::int64_t dr = cfg.relative_dim;
  const std::int64_t D = ds + dt;

  std::int64_t count = V * ds;  // static table
  if (cfg.kind != ModelKind::rotate) count += 3 * V * dt;  // amplitude/frequency/phase
  if (cfg.kind == ModelKind::rt_bilinear) {
    count += R * D * D;  // per-relation bilinear weight
  } else {
    count += R * (D / 2);  // relation rotation phases
  }
  if (cfg.is_relative()) {
    count += ds * dr;  // W_E static -> relative-time projection
    count += R * R;    // W_P importance matrix
  }
  if (cfg.kind == ModelKind::rt_bilinear) count += dr * dr;  // bilinear context weight
  return count;
}

struct ModelParams {
  ModelConfig config;

  // |V| x d_s
  std::vector<double> entity_static;
  // |V| x d_t each
  std::vector<double> entity_amplitude;
  std::vector<double> entity_frequency;
  std::vector<double> entity_phase;
  // |R| x (d_s+d_t)/2 rotation phases (unit modulus by construction)
  std::vector<double> relation_phase;
  // d_s x d_r, row-major (W_E)
  std::vector<double> time_projection;
  // |R| x |R|, row-major (W_P); row r weights which relations' elapsed
  // times matter when scoring relation r
  std::vector<double> relation_importance;
  // bilinear mode only: |R| x D x D and d_r x d_r
  std::vector<double> relation_bilinear;
  std::vector<double> context_bilinear;

  std::span<const double> static_row(EntityId e) const {
    return {entity_static.data() + static_cast<std::size_t>(e) * config.static_dim,
            static_cast<std::size_t>(config.static_dim)};
  }
  std::span<double> static_row(EntityId e) {
    return {entity_static.data() + static_cast<std::size_t>(e) * config.static_dim,
            static_cast<std::size_t>(config.static_dim)};
  }
  std::span<const double> amplitude_row(EntityId e) const {
    return {entity_amplitude.data() + static_cast<std::size_t>(e) * config.diachronic_dim,
            static_cast<std::size_t>(config.diachronic_dim)};
  }
  std::span<const double> frequency_row(EntityId e) const {
    return {entity_frequency.data() + static_cast<std::size_t>(e) * config.diachronic_dim,
            static_cast<std::size_t>(config.diachronic_dim)};
  }
  std::span<const double> phase_row(EntityId e) const {
    return {entity_phase.data() + static_cast<std::size_t>(e) * config.diachronic_dim,
            static_cast<std::size_t>(config.diachronic_dim)};
  }
  std::span<const double> rotation_row(RelationId r) const {
    return {relation_phase.data() + static_cast<std::size_t>(r) * config.num_pairs(),
            static_cast<std::size_t>(config.num_pairs())};
  }
  std::span<const double> importance_row(RelationId r) const {
    return {relation_importance.data() + static_cast<std::size_t>(r) * config.num_relations,
            static_cast<std::size_t>(config.num_relations)};
  }
  std::span<const double> bilinear_relation(RelationId r) const {
    std::size_t D = static_cast<std::size_t>(config.base_dim());
    return {relation_bilinear.data() + static_cast<std::size_t>(r) * D * D, D * D};
  }

  // W_E entry (a, j) with a < d_s, j < d_r.
  double we(int a, int j) const {
    return time_projection[static_cast<std::size_t>(a) * config.relative_dim +
                           static_cast<std::size_t>(j)];
  }

  std::int64_t num_scalars() const {
    return static_cast<std::int64_t>(entity_static.size() + entity_amplitude.size() +
                                     entity_frequency.size() + entity_phase.size() +
                                     relation_phase.size() + time_projection.size() +
                                     relation_importance.size() + relation_bilinear.size() +
                                     context_bilinear.size());
  }

  static ModelParams allocate(const ModelConfig& cfg) {
    cfg.validate();
    ModelParams p;
    p.config = cfg;
    const std::size_t V = static_cast<std::size_t>(cfg.num_entities);
    const std::size_t R = static_cast<std::size_t>(cfg.num_relations);
    const std::size_t D = static_cast<std::size_t>(cfg.base_dim());
    p.entity_static.assign(V * cfg.static_dim, 0.0);
    if (cfg.kind != ModelKind::rotate) {
      p.entity_amplitude.assign(V * cfg.diachronic_dim, 0.0);
      p.entity_frequency.assign(V * cfg.diachronic_dim, 0.0);
      p.entity_phase.assign(V * cfg.diachronic_dim, 0.0);
    }
    if (cfg.kind == ModelKind::rt_bilinear) {
      p.relation_bilinear.assign(R * D * D, 0.0);
      p.context_bilinear.assign(static_cast<std::size_t>(cfg.relative_dim) * cfg.relative_dim, 0.0);
    } else {
      p.relation_phase.assign(R * static_cast<std::size_t>(cfg.num_pairs()), 0.0);
    }
    if (cfg.is_relative()) {
      p.time_projection.assign(static_cast<std::size_t>(cfg.static_dim) * cfg.relative_dim, 0.0);
      p.relation_importance.assign(R * R, 0.0);
    }
    return p;
  }

  // Random initialization. W_P starts at zero: the relative-time terms then
  // reduce to || E W_E || at step 0 and the importance rows wake up through
  // their gradient, which keeps an untrained export all-zero.
  static ModelParams init(const ModelConfig& cfg, Rng rng) {
    ModelParams p = allocate(cfg);
    Rng r = rng.stream("init");
    const double bound = 6.0 / std::sqrt(static_cast<double>(cfg.base_dim()));
    for (double& w : p.entity_static) w = r.uniform(-bound, bound);
    for (double& w : p.entity_amplitude) w = r.uniform(-bound, bound);
    for (double& w : p.entity_frequency) w = r.uniform(-bound, bound);
    for (double& w : p.entity_phase) w = r.uniform(-M_PI, M_PI);
    for (double& w : p.relation_phase) w = r.uniform(-M_PI, M_PI);
    if (cfg.is_relative() && cfg.relative_dim > 0) {
      const double wb = std::sqrt(6.0 / static_cast<double>(cfg.static_dim + cfg.relative_dim));
      for (double& w : p.time_projection) w = r.uniform(-wb, wb);
    }
    if (cfg.kind == ModelKind::rt_bilinear) {
      const double bb = std::sqrt(3.0 / static_cast<double>(cfg.base_dim()));
      for (double& w : p.relation_bilinear) w = r.uniform(-bb, bb);
      if (cfg.relative_dim > 0) {
        const double cb = std::sqrt(3.0 / static_cast<double>(cfg.relative_dim));
        for (double& w : p.context_bilinear) w = r.uniform(-cb, cb);
      }
    }
    return p;
  }
};

// D(e, t): static row concatenated with A + sin(t * F + phi), elementwise.
inline void diachronic_embed(const ModelParams& p, EntityId e, Timestamp t,
                             std::span<double> out) {
  const int ds = p.config.static_dim;
  const int dt = p.config.diachronic_dim;
  auto stat = p.static_row(e);
  for (int i = 0; i < ds; ++i) out[static_cast<std::size_t>(i)] = stat[static_cast<std::size_t>(i)];
  if (dt == 0) return;
  auto amp = p.amplitude_row(e);
  auto freq = p.frequency_row(e);
  auto phase = p.phase_row(e);
  for (int i = 0; i < dt; ++i) {
    out[static_cast<std::size_t>(ds + i)] =
        amp[static_cast<std::size_t>(i)] +
        std::sin(static_cast<double>(t) * freq[static_cast<std::size_t>(i)] +
                 phase[static_cast<std::size_t>(i)]);
  }
}

inline std::vector<double> diachronic_embed(const ModelParams& p, EntityId e, Timestamp t) {
  std::vector<double> out(static_cast<std::size_t>(p.config.base_dim()));
  diachronic_embed(p, e, t, out);
  return out;
}

// Sum over complex pairs of | h_k * e^(i theta_k) - t_k |.
inline double rotation_distance(std::span<const double> head, std::span<const double> tail,
                                std::span<const double> phases) {
  double total = 0.0;
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const double a = head[2 * k], b = head[2 * k + 1];
    const double c = tail[2 * k], d = tail[2 * k + 1];
    const double cr = std::cos(phases[k]), sr = std::sin(phases[k]);
    const double re = a * cr - b * sr - c;
    const double im = a * sr + b * cr - d;
    total += std::sqrt(re * re + im * im);
  }
  return total;
}

// gamma(r, e, t, t_q) = W_P(r) * P(e, t, t_q), where row r' of P is
// rho(t - t_q + delta(e, r', t_q)) and rows with no history are zero.
inline void fill_gamma(const ModelParams& p, const RelativeContextIndex& index, RelationId r,
                       EntityId e, Timestamp t, Timestamp t_q, const PositionalEncoder& enc,
                       std::span<double> out, std::span<double> row_scratch) {
  std::fill(out.begin(), out.end(), 0.0);
  auto weights = p.importance_row(r);
  for (RelationId rp = 0; rp < p.config.num_relations; ++rp) {
    auto delta = index.delta(e, rp, t_q);
    if (!delta) continue;  // no history: zero row contributes nothing
    const double w = weights[static_cast<std::size_t>(rp)];
    if (w == 0.0) continue;
    enc.fill(static_cast<double>(t) - static_cast<double>(t_q) + static_cast<double>(*delta),
             row_scratch);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * row_scratch[j];
  }
}

inline std::vector<double> gamma(const ModelParams& p, const RelativeContextIndex& index,
                                 RelationId r, EntityId e, Timestamp t, Timestamp t_q) {
  PositionalEncoder enc(p.config.relative_dim);
  std::vector<double> out(static_cast<std::size_t>(p.config.relative_dim));
  std::vector<double> scratch(out.size());
  fill_gamma(p, index, r, e, t, t_q, enc, out, scratch);
  return out;
}

// E(x) W_E: project the static row into relative-time space.
inline void fill_static_projection(const ModelParams& p, EntityId e, std::span<double> out) {
  const int ds = p.config.static_dim;
  const int dr = p.config.relative_dim;
  std::fill(out.begin(), out.end(), 0.0);
  auto stat = p.static_row(e);
  for (int a = 0; a < ds; ++a) {
    const double ea = stat[static_cast<std::size_t>(a)];
    if (ea == 0.0) continue;
    const double* wrow = p.time_projection.data() + static_cast<std::size_t>(a) * dr;
    for (int j = 0; j < dr; ++j) out[static_cast<std::size_t>(j)] += ea * wrow[j];
  }
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

// Static RotatE distance; lower is more plausible.
inline double rotate_score(const ModelParams& p, EntityId s, RelationId r, EntityId o) {
  return rotation_distance(p.static_row(s), p.static_row(o), p.rotation_row(r));
}

// DE-RotatE distance at time t.
inline double de_rotate_score(const ModelParams& p, EntityId s, RelationId r, EntityId o,
                              Timestamp t) {
  std::vector<double> ds(static_cast<std::size_t>(p.config.base_dim()));
  std::vector<double> dt(ds.size());
  diachronic_embed(p, s, t, ds);
  diachronic_embed(p, o, t, dt);
  return rotation_distance(ds, dt, p.rotation_row(r));
}

// RT-DE-RotatE distance: rotation term plus the two relative-time context
// terms, all L1.
inline double rt_de_rotate_score(const ModelParams& p, const RelativeContextIndex& index,
                                 EntityId s, RelationId r, EntityId o, Timestamp t,
                                 Timestamp t_q) {
  double total = de_rotate_score(p, s, r, o, t);
  const std::size_t dr = static_cast<std::size_t>(p.config.relative_dim);
  if (dr == 0) return total;
  PositionalEncoder enc(p.config.relative_dim);
  std::vector<double> scratch(dr), gam(dr), proj(dr);
  fill_gamma(p, index, r, o, t, t_q, enc, gam, scratch);
  fill_static_projection(p, s, proj);
  total += l1_distance(proj, gam);
  fill_gamma(p, index, r, s, t, t_q, enc, gam, scratch);
  fill_static_projection(p, o, proj);
  total += l1_distance(gam, proj);
  return total;
}

// Bilinear variant (scoring-only mode); higher is more plausible.
inline double rt_bilinear_score(const ModelParams& p, const RelativeContextIndex& index,
                                EntityId s, RelationId r, EntityId o, Timestamp t,
                                Timestamp t_q) {
  if (p.config.kind != ModelKind::rt_bilinear) {
    throw std::logic_error("rt_bilinear_score: bilinear mode not enabled");
  }
  const std::size_t D = static_cast<std::size_t>(p.config.base_dim());
  const std::size_t dr = static_cast<std::size_t>(p.config.relative_dim);
  std::vector<double> ds(D), dt(D);
  diachronic_embed(p, s, t, ds);
  diachronic_embed(p, o, t, dt);

  auto W = p.bilinear_relation(r);
  double total = 0.0;
  for (std::size_t a = 0; a < D; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < D; ++b) acc += W[a * D + b] * dt[b];
    total += ds[a] * acc;
  }
  if (dr == 0) return total;

  PositionalEncoder enc(p.config.relative_dim);
  std::vector<double> scratch(dr), gs(dr), go(dr), us(dr), uo(dr);
  fill_gamma(p, index, r, s, t, t_q, enc, gs, scratch);
  fill_gamma(p, index, r, o, t, t_q, enc, go, scratch);
  fill_static_projection(p, s, us);
  fill_static_projection(p, o, uo);

  for (std::size_t j = 0; j < dr; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dr; ++k) acc += p.context_bilinear[j * dr + k] * go[k];
    total += gs[j] * acc;
  }
  for (std::size_t j = 0; j < dr; ++j) total += us[j] * go[j];
  for (std::size_t j = 0; j < dr; ++j) total += gs[j] * uo[j];
  return total;
}

// Kind dispatch with distance semantics: lower = more plausible for every
// kind (the bilinear score is negated).
inline double distance(const ModelParams& p, const RelativeContextIndex* index, EntityId s,
                       RelationId r, EntityId o, Timestamp t, Timestamp t_q) {
  switch (p.config.kind) {
    case ModelKind::rotate:
      return rotate_score(p, s, r, o);
    case ModelKind::de_rotate:
      return de_rotate_score(p, s, r, o, t);
    case ModelKind::rt_de_rotate:
      return rt_de_rotate_score(p, *index, s, r, o, t, t_q);
    case ModelKind::rt_bilinear:
      return -rt_bilinear_score(p, *index, s, r, o, t, t_q);
  }
  throw std::logic_error("distance: unknown model kind");
}

// ---------------------------------------------------------------------------
// Checkpoints: versioned binary container; round-trips are bit-exact.

struct Checkpoint {
  ModelParams params;
  std::vector<std::string> relation_labels;
  std::uint64_t seed = 0;
  std::uint64_t rng_state = 0;
  std::uint64_t step = 0;
  bool trained_with_validation = false;
  std::uint64_t entity_vocab_hash = 0;
  std::uint64_t relation_vocab_hash = 0;
};

namespace detail {

inline constexpr char kCheckpointMagic[8] = {'T', 'K', 'G', 'E', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

inline void write_table(std::ostream& out, const std::vector<double>& t) {
  write_pod<std::uint64_t>(out, t.size());
  if (!t.empty()) {
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
}

inline std::vector<double> read_table(std::istream& in) {
  auto n = read_pod<std::uint64_t>(in);
  std::vector<double> t(n);
  if (n > 0) {
    in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated table");
  }
  return t;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
  auto n = read_pod<std::uint32_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("checkpoint: truncated string");
  return s;
}

}  // namespace detail

inline std::uint64_t vocab_hash(const std::vector<std::string>& labels) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& s : labels) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  out.write(detail::kCheckpointMagic, sizeof(detail::kCheckpointMagic));
  detail::write_pod(out, detail::kCheckpointVersion);
  const ModelConfig& cfg = ckpt.params.config;
  detail::write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(cfg.kind));
  detail::write_pod<std::int32_t>(out, cfg.num_entities);
  detail::write_pod<std::int32_t>(out, cfg.num_relations);
  detail::write_pod<std::int32_t>(out, cfg.static_dim);
  detail::write_pod<std::int32_t>(out, cfg.diachronic_dim);
  detail::write_pod<std::int32_t>(out, cfg.relative_dim);
  detail::write_pod<std::uint8_t>(out, ckpt.trained_with_validation ? 1 : 0);
  detail::write_pod<std::uint64_t>(out, ckpt.seed);
  detail::write_pod<std::uint64_t>(out, ckpt.rng_state);
  detail::write_pod<std::uint64_t>(out, ckpt.step);
  detail::write_pod<std::uint64_t>(out, ckpt.entity_vocab_hash);
  detail::write_pod<std::uint64_t>(out, ckpt.relation_vocab_hash);
  detail::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.relation_labels.size()));
  for (const auto& s : ckpt.relation_labels) detail::write_string(out, s);
  detail::write_table(out, ckpt.params.entity_static);
  detail::write_table(out, ckpt.params.entity_amplitude);
  detail::write_table(out, ckpt.params.entity_frequency);
  detail::write_table(out, ckpt.params.entity_phase);
  detail::write_table(out, ckpt.params.relation_phase);
  detail::write_table(out, ckpt.params.time_projection);
  detail::write_table(out, ckpt.params.relation_importance);
  detail::write_table(out, ckpt.params.relation_bilinear);
  detail::write_table(out, ckpt.params.context_bilinear);
  if (!out) throw std::runtime_error("checkpoint: write failed: " + path.string());
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, detail::kCheckpointMagic, 8) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path.string());
  }
  auto version = detail::read_pod<std::uint32_t>(in);
  if (version != detail::kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ModelConfig cfg;
  cfg.kind = static_cast<ModelKind>(detail::read_pod<std::uint8_t>(in));
  cfg.num_entities = detail::read_pod<std::int32_t>(in);
  cfg.num_relations = detail::read_pod<std::int32_t>(in);
  cfg.static_dim = detail::read_pod<std::int32_t>(in);
  cfg.diachronic_dim = detail::read_pod<std::int32_t>(in);
  cfg.relative_dim = detail::read_pod<std::int32_t>(in);
  ckpt.trained_with_validation = detail::read_pod<std::uint8_t>(in) != 0;
  ckpt.seed = detail::read_pod<std::uint64_t>(in);
  ckpt.rng_state = detail::read_pod<std::uint64_t>(in);
  ckpt.step = detail::read_pod<std::uint64_t>(in);
  ckpt.entity_vocab_hash = detail::read_pod<std::uint64_t>(in);
  ckpt.relation_vocab_hash = detail::read_pod<std::uint64_t>(in);
  auto n_labels = detail::read_pod<std::uint32_t>(in);
  ckpt.relation_labels.reserve(n_labels);
  for (std::uint32_t i = 0; i < n_labels; ++i) ckpt.relation_labels.push_back(detail::read_string(in));
  ckpt.params.config = cfg;
  ckpt.params.entity_static = detail::read_table(in);
  ckpt.params.entity_amplitude = detail::read_table(in);
  ckpt.params.entity_frequency = detail::read_table(in);
  ckpt.params.entity_phase = detail::read_table(in);
  ckpt.params.relation_phase = detail::read_table(in);
  ckpt.params.time_projection = detail::read_table(in);
  ckpt.params.relation_importance = detail::read_table(in);
  ckpt.params.relation_bilinear = detail::read_table(in);
  ckpt.params.context_bilinear = detail::read_table(in);
  cfg.validate();
  ModelParams shape = ModelParams::allocate(cfg);
  if (shape.entity_static.size() != ckpt.params.entity_static.size() ||
      shape.entity_amplitude.size() != ckpt.params.entity_amplitude.size() ||
      shape.entity_frequency.size() != ckpt.params.entity_frequency.size() ||
      shape.entity_phase.size() != ckpt.params.entity_phase.size() ||
      shape.relation_phase.size() != ckpt.params.relation_phase.size() ||
      shape.time_projection.size() != ckpt.params.time_projection.size() ||
      shape.relation_importance.size() != ckpt.params.relation_importance.size() ||
      shape.relation_bilinear.size() != ckpt.params.relation_bilinear.size() ||
      shape.context_bilinear.size() != ckpt.params.context_bilinear.size()) {
    throw std::runtime_error("checkpoint: table sizes disagree with config");
  }
  return ckpt;
}

}  // namespace tkge
