// Sinusoidal positional encoding of relative times.
//
// Component j of rho(i) is sin(i / 10000^(floor(j/2)/d)) for even j and
// cos of the same angle for odd j, with j = 0..d-1.

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace tkge {

inline void fill_positional_row(double i, std::span<double> out) {
  const std::size_t d = out.size();
  for (std::size_t j = 0; j + 1 < d; j += 2) {
    double angle = i / std::pow(10000.0, static_cast<double>(j / 2) / static_cast<double>(d));
    out[j] = std::sin(angle);
    out[j + 1] = std::cos(angle);
  }
}

inline std::vector<double> positional_row(double i, int d) {
  if (d < 0 || d % 2 != 0) throw std::invalid_argument("positional_row: d must be even and >= 0");
  std::vector<double> out(static_cast<std::size_t>(d));
  fill_positional_row(i, out);
  return out;
}

// Precomputed inverse frequencies for repeated rho evaluations at one
// dimension; pair k covers components 2k and 2k+1.
class PositionalEncoder {
 public:
  explicit PositionalEncoder(int d) : d_(d) {
    if (d < 0 || d % 2 != 0) throw std::invalid_argument("PositionalEncoder: d must be even");
    inv_freq_.resize(static_cast<std::size_t>(d / 2));
    for (std::size_t k = 0; k < inv_freq_.size(); ++k) {
      inv_freq_[k] =
          1.0 / std::pow(10000.0, static_cast<double>(k) / static_cast<double>(d));
    }
  }

  int dim() const { return d_; }

  void fill(double i, std::span<double> out) const {
    for (std::size_t k = 0; k < inv_freq_.size(); ++k) {
      double angle = i * inv_freq_[k];
      out[2 * k] = std::sin(angle);
      out[2 * k + 1] = std::cos(angle);
    }
  }

 private:
  int d_;
  std::vector<double> inv_freq_;
};

}  // namespace tkge
