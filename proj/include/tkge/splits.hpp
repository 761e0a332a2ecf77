// Train/validation/test splits over a temporal KG.
//
// Random splits serve interpolated queries (test timestamps fall inside the
// training range); temporal splits serve extrapolated queries (test facts
// occur strictly after training facts).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "tkge/graph.hpp"
#include "tkge/rng.hpp"
#include "tkge/types.hpp"

namespace tkge {

enum class SplitMode { interpolated, extrapolated };

struct DatasetSplit {
  std::vector<Quadruple> train;
  std::vector<Quadruple> validation;
  std::vector<Quadruple> test;
  SplitMode mode = SplitMode::interpolated;

  std::size_t total() const { return train.size() + validation.size() + test.size(); }
};

namespace detail {

inline void check_ratios(const std::array<double, 3>& ratios) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split: ratios must sum to 1");
  for (double r : ratios) {
    if (r < 0.0) throw std::invalid_argument("split: negative ratio");
  }
}

}  // namespace detail

// Deterministic shuffled split. Validation and test get floor(ratio * n)
// tuples each; the remainder goes to train.
inline DatasetSplit split_random(const TemporalKG& kg, const std::array<double, 3>& ratios,
                                 std::uint64_t seed) {
  detail::check_ratios(ratios);
  const auto& quads = kg.quadruples();
  if (quads.size() < 3) throw std::invalid_argument("split_random: need at least 3 tuples");

  std::vector<std::size_t> order(quads.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng(seed).stream("split");
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(order[i - 1], order[j]);
  }

  std::size_t n = quads.size();
  std::size_t n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));
  std::size_t n_test = static_cast<std::size_t>(std::floor(ratios[2] * static_cast<double>(n)));
  std::size_t n_train = n - n_val - n_test;

  DatasetSplit split;
  split.mode = SplitMode::interpolated;
  split.train.reserve(n_train);
  split.validation.reserve(n_val);
  split.test.reserve(n_test);
  for (std::size_t i = 0; i < n; ++i) {
    const Quadruple& q = quads[order[i]];
    if (i < n_train) {
      split.train.push_back(q);
    } else if (i < n_train + n_val) {
      split.validation.push_back(q);
    } else {
      split.test.push_back(q);
    }
  }
  return split;
}

// Contiguous split on the time axis: tuples are ordered by timestamp (stable
// on input order), then cut at the ratio boundaries. Tuples sharing a
// boundary timestamp always go to the earlier split, so no timestamp ever
// straddles two splits.
inline DatasetSplit split_temporal(const TemporalKG& kg, const std::array<double, 3>& ratios) {
  detail::check_ratios(ratios);
  const auto& quads = kg.quadruples();
  if (quads.empty()) throw std::invalid_argument("split_temporal: empty KG");
  if (kg.tmin() == kg.tmax()) {
    throw std::invalid_argument("split_temporal: all tuples share one timestamp, no temporal boundary exists");
  }

  std::vector<Quadruple> sorted(quads.begin(), quads.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Quadruple& a, const Quadruple& b) { return a.t < b.t; });

  std::size_t n = sorted.size();
  std::size_t n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));
  std::size_t n_test = static_cast<std::size_t>(std::floor(ratios[2] * static_cast<double>(n)));
  std::size_t n_train = n - n_val - n_test;

  // Push a cut right until it lands on a timestamp boundary.
  auto extend = [&sorted, n](std::size_t cut) {
    while (cut > 0 && cut < n && sorted[cut].t == sorted[cut - 1].t) ++cut;
    return cut;
  };
  std::size_t train_end = extend(n_train);
  std::size_t val_end = extend(std::min(n, train_end + n_val));

  DatasetSplit split;
  split.mode = SplitMode::extrapolated;
  split.train.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(train_end));
  split.validation.assign(sorted.begin() + static_cast<std::ptrdiff_t>(train_end),
                          sorted.begin() + static_cast<std::ptrdiff_t>(val_end));
  split.test.assign(sorted.begin() + static_cast<std::ptrdiff_t>(val_end), sorted.end());
  return split;
}

}  // namespace tkge
