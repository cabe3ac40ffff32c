#pragma once

// Predicted loci of the multivalue clouds and residual fits against them.
//
//   K, signb fixed      origin K(k), generators 4K(k), 4iK(b)
//   K, both signs of b  origin K(k), generators 4K(k), 2iK(b)
//   F                   origin F(phi,k), generators 4K(k), 4iK(b),
//                       cosets {0, 2K(k) - 2F(phi,k)}
//   E                   origin E(k), generators 4E(k), 4i(K(b) - E(b))
//   N = E/K             circle through 1 - E(b)/K(b) and E(k)/K(k)
//   Z, gamma_n = delta_{n-1}
//                       origin Z(phi,k), single generator 2 pi i / K(k)

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "enumerator.hpp"
#include "reference.hpp"

namespace eagm {

struct LatticeSpec {
  cplx origin;
  cplx gen1;
  cplx gen2{0.0, 0.0};  ///< zero for a one-dimensional lattice
  std::vector<cplx> cosets{cplx{0.0, 0.0}};

  bool one_dimensional() const { return gen2 == cplx{0.0, 0.0}; }

  void validate() const {
    if (gen1 == cplx{0.0, 0.0}) throw std::invalid_argument("lattice generator is zero");
    if (!one_dimensional() && (gen2 / gen1).imag() == 0.0)
      throw std::invalid_argument("lattice generators are parallel");
    if (cosets.empty()) throw std::invalid_argument("lattice needs at least one coset");
  }
};

struct CircleSpec {
  double x1;  ///< real-axis crossings
  double x2;

  double center() const { return 0.5 * (x1 + x2); }
  double radius() const { return 0.5 * std::abs(x2 - x1); }

  void validate() const {
    if (!(radius() > 0.0)) throw std::invalid_argument("circle radius must be > 0");
  }
};

using Locus = std::variant<LatticeSpec, CircleSpec>;

struct PointFit {
  std::int64_t m = 0;
  std::int64_t n = 0;
  int coset = 0;
  double residual = 0.0;
  bool excluded = false;  ///< ill-conditioned, not counted in max_residual
};

struct FitReport {
  std::vector<PointFit> points;
  double max_residual = 0.0;
  std::optional<std::size_t> worst_point;
  std::size_t flagged_excluded = 0;
  double tol = 0.0;
  bool passed = false;
};

/// Default absolute tolerance for clouds from 20-iteration traces.
inline constexpr double default_fit_tol = 1e-6;

/// Locus predicted for a cloud of `kind`.  F and restricted-Z loci need
/// `refs.amplitude`.  `both_signs` selects the denser K lattice of the
/// combined +b/-b sweep.
inline Locus predict_locus(FunctionKind kind, const ReferenceSet& refs, bool both_signs = false) {
  const cplx i{0.0, 1.0};
  switch (kind) {
    case FunctionKind::K:
      return LatticeSpec{refs.K_k, 4.0 * refs.K_k, (both_signs ? 2.0 : 4.0) * i * refs.K_b};
    case FunctionKind::F: {
      if (!refs.amplitude) throw std::invalid_argument("F locus needs the amplitude reference");
      const cplx F = refs.amplitude->F;
      return LatticeSpec{F, 4.0 * refs.K_k, 4.0 * i * refs.K_b, {0.0, 2.0 * refs.K_k - 2.0 * F}};
    }
    case FunctionKind::E:
      return LatticeSpec{refs.E_k, 4.0 * refs.E_k, 4.0 * i * (refs.K_b - refs.E_b)};
    case FunctionKind::N:
      return CircleSpec{1.0 - refs.N_k2.real(), refs.N_b2.real()};
    case FunctionKind::ZRestricted:
      if (!refs.amplitude) throw std::invalid_argument("Zeta locus needs the amplitude reference");
      return LatticeSpec{refs.amplitude->Z, refs.qZ};
    case FunctionKind::Z:
      break;
  }
  throw std::invalid_argument("no predicted locus for the unrestricted Zeta cloud");
}

/// Nearest lattice point to `value`: integer coordinates, coset and distance.
inline PointFit nearest_lattice_point(cplx value, const LatticeSpec& spec) {
  PointFit best;
  best.residual = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < spec.cosets.size(); ++c) {
    const cplx d = value - spec.origin - spec.cosets[c];
    double m = 0.0, n = 0.0;
    if (spec.one_dimensional()) {
      m = std::round((d / spec.gen1).real());
    } else {
      // [Re g1 Re g2; Im g1 Im g2] (m, n)^T = (Re d, Im d)^T
      const cplx g1 = spec.gen1, g2 = spec.gen2;
      const double det = g1.real() * g2.imag() - g1.imag() * g2.real();
      m = std::round((d.real() * g2.imag() - d.imag() * g2.real()) / det);
      n = std::round((g1.real() * d.imag() - g1.imag() * d.real()) / det);
    }
    const double r = std::abs(d - m * spec.gen1 - n * spec.gen2);
    if (r < best.residual) {
      best.m = static_cast<std::int64_t>(m);
      best.n = static_cast<std::int64_t>(n);
      best.coset = static_cast<int>(c);
      best.residual = r;
    }
  }
  return best;
}

namespace detail {

inline PointFit fit_point(cplx value, const Locus& locus) {
  if (!is_finite(value)) {
    PointFit pf;
    pf.residual = std::numeric_limits<double>::infinity();
    return pf;
  }
  if (const auto* lat = std::get_if<LatticeSpec>(&locus)) return nearest_lattice_point(value, *lat);
  const auto& circle = std::get<CircleSpec>(locus);
  PointFit pf;
  pf.residual = std::abs(std::abs(value - circle.center()) - circle.radius());
  return pf;
}

inline void validate(const Locus& locus) {
  std::visit([](const auto& spec) { spec.validate(); }, locus);
}

}  // namespace detail

/// Residual of every point against `locus`.  Flagged points are reported
/// but excluded from max_residual; passed iff max_residual < tol.
inline FitReport fit_cloud(std::span<const MultivaluePoint> cloud, const Locus& locus, double tol) {
  detail::validate(locus);
  FitReport rep;
  rep.tol = tol;
  rep.points.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    PointFit pf = detail::fit_point(cloud[i].value, locus);
    pf.excluded = cloud[i].ill_conditioned;
    if (pf.excluded) {
      ++rep.flagged_excluded;
    } else if (!rep.worst_point || pf.residual > rep.max_residual) {
      rep.max_residual = pf.residual;
      rep.worst_point = i;
    }
    rep.points.push_back(pf);
  }
  rep.passed = rep.max_residual < tol;
  return rep;
}

/// Same fit for bare values, none of them flagged.
inline FitReport fit_values(std::span<const cplx> values, const Locus& locus, double tol) {
  std::vector<MultivaluePoint> pts(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) pts[i].value = values[i];
  return fit_cloud(pts, locus, tol);
}

}  // namespace eagm
