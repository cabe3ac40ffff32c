#pragma once

// Modified AGM on triplets (x, y, z):
//   x' = (x + y)/2,  y' = z ± sqrt((x - z)(y - z)),  z' = 2z - y'
// Started from (1, b^2, 0) with positive roots, x_n reproduces the partial
// Gauss sums 1 - S_n and converges to E(k)/K(k).

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "complex_core.hpp"
#include "lattice.hpp"
#include "reference.hpp"

namespace eagm {

struct MagmTriplet {
  cplx x, y, z;
};

/// One MAGM row.  The root is the one near the mean of (x-z) and (y-z).
/// z grows like 2^n, so y' is formed relative to (x+y)/2: with
/// P = (x-z) + (y-z) + 2r, the near root gives y' = (x+y)/2 - (x-y)^2/(2P)
/// and the far root y' = (x+y)/2 - P/2.
inline MagmTriplet magm_step(const MagmTriplet& t, Sign sign = Sign::plus) {
  const cplx dx = t.x - t.z, dy = t.y - t.z;
  const cplx r = near_root(dx, dy);
  const cplx p = dx + dy + 2.0 * r;
  const cplx mean = (t.x + t.y) / 2.0;
  cplx y_next;
  if (sign == Sign::minus) {
    y_next = mean - p / 2.0;
  } else if (p == cplx{0.0, 0.0}) {
    y_next = t.z + r;
  } else {
    const cplx gap = t.x - t.y;
    y_next = mean - gap * gap / (2.0 * p);
  }
  return {mean, y_next, 2.0 * t.z - y_next};
}

struct MagmEquivalence {
  double max_row_deviation;  ///< max over n <= rows of |x_n - (1 - S_n)|
  double limit_deviation;    ///< |x_rows - E(k)/K(k)|
  cplx limit;
  std::vector<MagmTriplet> triplets;
  std::vector<cplx> partial_series;  ///< 1 - S_n
};

/// Runs AGM(1, b) and MAGM(1, b^2, 0) side by side for `rows` steps.
inline MagmEquivalence magm_equivalence(double b, int rows = 20) {
  if (!(b > 0.0 && b < 1.0)) throw std::domain_error("b must lie in (0, 1)");
  if (rows < 0) throw std::invalid_argument("rows must be >= 0");

  MagmEquivalence out{};
  MagmTriplet t{1.0, b * b, 0.0};
  double a = 1.0, g = b;
  double sum = 1.0 + b, diff = 1.0 - b;
  double s = 0.0, weight = 0.5;
  for (int n = 0;; ++n) {
    out.triplets.push_back(t);
    out.partial_series.push_back(1.0 - s);
    out.max_row_deviation = std::max(out.max_row_deviation, std::abs(t.x - (1.0 - s)));
    if (n == rows) break;
    s += weight * diff * sum;
    weight *= 2.0;
    const double next_a = sum / 2.0, next_g = std::sqrt(a * g);
    const double next_sum = next_a + next_g;
    diff = diff * diff / (4.0 * next_sum);
    a = next_a;
    g = next_g;
    sum = next_sum;
    t = magm_step(t);
  }
  const CompleteIntegrals ref = ref_complete_from_complement(b);
  out.limit = t.x;
  out.limit_deviation = std::abs(t.x - ref.E / ref.K);
  return out;
}

struct MagmOutcome {
  std::uint64_t sign_mask;
  int rows;
  bool converged;
  MagmTriplet last;
  /// Distance from K(k)·x_limit to the nearest E-lattice point, when converged.
  std::optional<double> lattice_distance;
};

/// MAGM from (1, b^2, 0) taking the far root at every step whose bit is set
/// in `sign_mask`.  Divergence and non-finite iterates are recorded, not thrown.
inline MagmOutcome magm_negative_experiment(double b, std::uint64_t sign_mask, int rows = 40) {
  if (!(b > 0.0 && b < 1.0)) throw std::domain_error("b must lie in (0, 1)");
  MagmTriplet t{1.0, b * b, 0.0};
  bool finite = true;
  for (int n = 0; n < rows && finite; ++n) {
    t = magm_step(t, SignSchedule::bit(sign_mask, n));
    finite = is_finite(t.x) && is_finite(t.y) && is_finite(t.z);
  }
  MagmOutcome out{sign_mask, rows, false, t, std::nullopt};
  out.converged = finite && std::abs(t.x - t.y) <= 1e-10 * std::max(1.0, std::abs(t.x));
  if (out.converged) {
    const ReferenceSet refs = reference_set(b);
    const auto& lattice = std::get<LatticeSpec>(predict_locus(FunctionKind::E, refs));
    out.lattice_distance = nearest_lattice_point(t.x * refs.K_k, lattice).residual;
  }
  return out;
}

/// Outcomes for every mask below 2^width.
inline std::vector<MagmOutcome> magm_negative_sweep(double b, unsigned width, int rows = 40) {
  if (width > 16) throw std::invalid_argument("mask width above 16");
  std::vector<MagmOutcome> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << width); ++mask)
    out.push_back(magm_negative_experiment(b, mask, rows));
  return out;
}

}  // namespace eagm
