#pragma once

// Ground-truth values used to check the multivalue clouds: the principal
// complete integrals from the classical AGM, adaptive quadrature for the
// incomplete integrals, and the exact identities relating them (Legendre,
// Landen products, Zeta lattice generator).

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "complex_core.hpp"

namespace eagm {

struct CompleteIntegrals {
  cplx K;
  cplx E;
};

/// K and E for the complementary modulus b: K = pi/(2 AGM(1, b)),
/// E = K (1 - S) with Gauss's series S, iterated until the gap vanishes.
/// Taking b directly keeps moduli near 1 free of sqrt(1 - x^2) rounding.
inline CompleteIntegrals ref_complete_from_complement(cplx b) {
  if (b == cplx{0.0, 0.0}) throw std::domain_error("logarithmic singularity (k^2 = 1)");
  if (!is_finite(b)) throw std::invalid_argument("complementary modulus must be finite");

  // The gap a - g is carried as (a-g)^2 / (4(a'+g')) and squares every
  // step, so it reaches exactly zero well within the iteration cap.
  cplx a = 1.0, g = b;
  cplx sum = 1.0 + b;
  cplx diff = 1.0 - b;
  cplx s = 0.0;
  double weight = 0.5;
  for (int n = 0; n < 80 && diff != cplx{0.0, 0.0}; ++n) {
    s += weight * diff * sum;
    const cplx next_a = sum / 2.0;
    const cplx next_g = near_root(a, g, sum);
    const cplx next_sum = next_a + next_g;
    diff = next_sum == cplx{0.0, 0.0} ? next_a - next_g : diff * diff / (4.0 * next_sum);
    a = next_a;
    g = next_g;
    sum = next_sum;
    weight *= 2.0;
  }
  const cplx K = std::numbers::pi / (2.0 * a);
  return {K, K * (1.0 - s)};
}

/// K(k), E(k) on the principal branch.
inline CompleteIntegrals ref_complete(cplx k) {
  const cplx b2 = (1.0 - k) * (1.0 + k);
  if (b2 == cplx{0.0, 0.0}) throw std::domain_error("logarithmic singularity (k^2 = 1)");
  return ref_complete_from_complement(principal_sqrt(b2));
}

namespace detail {

// Adaptive Simpson with Richardson correction.
inline double simpson_step(const std::function<double(double)>& f, double lo, double hi,
                           double f_lo, double f_mid, double f_hi, double whole, double tol,
                           int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  const double f_lm = f(lm), f_rm = f(rm);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, lo, mid, f_lo, f_lm, f_mid, left, tol / 2.0, depth - 1) +
         simpson_step(f, mid, hi, f_mid, f_rm, f_hi, right, tol / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                               double tol) {
  if (hi == lo) return 0.0;
  const double f_lo = f(lo), f_hi = f(hi), f_mid = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  return simpson_step(f, lo, hi, f_lo, f_mid, f_hi, whole, tol, 40);
}

inline void check_amplitude_range(double phi, double k) {
  if (!(phi >= 0.0 && phi <= std::numbers::pi / 2.0))
    throw std::domain_error("amplitude must lie in [0, pi/2]");
  if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("modulus must lie in [0, 1)");
}

constexpr double quad_tol = 1e-11;

}  // namespace detail

/// F(phi, k) = integral_0^phi (1 - k^2 sin^2 t)^(-1/2) dt
inline double quad_F(double phi, double k) {
  detail::check_amplitude_range(phi, k);
  const double k2 = k * k;
  return detail::adaptive_simpson(
      [k2](double t) {
        const double s = std::sin(t);
        return 1.0 / std::sqrt(1.0 - k2 * s * s);
      },
      0.0, phi, detail::quad_tol);
}

/// E(phi, k) = integral_0^phi (1 - k^2 sin^2 t)^(1/2) dt
inline double quad_E_inc(double phi, double k) {
  detail::check_amplitude_range(phi, k);
  const double k2 = k * k;
  return detail::adaptive_simpson(
      [k2](double t) {
        const double s = std::sin(t);
        return std::sqrt(1.0 - k2 * s * s);
      },
      0.0, phi, detail::quad_tol);
}

/// Z(phi, k) = E(phi, k) - F(phi, k) E(k)/K(k), all by quadrature.
inline double quad_Z(double phi, double k) {
  const double half_pi = std::numbers::pi / 2.0;
  const double ratio = quad_E_inc(half_pi, k) / quad_F(half_pi, k);
  return quad_E_inc(phi, k) - quad_F(phi, k) * ratio;
}

/// Zeta lattice generator 2 pi i / K(k).
inline cplx qZ(cplx k) {
  return cplx{0.0, 2.0 * std::numbers::pi} / ref_complete(k).K;
}

struct LandenResiduals {
  double two;   ///< |K(k)K(v) - 2K(b)K(q)|
  double four;  ///< |K(k)K(w) - 4K(b)K(c)|
};

/// Landen product identities for one and two transformations, with
/// q = (1-b)/(1+b), v = 2 sqrt(b)/(1+b) = sqrt(1-q^2),
/// c = (1-v)/(1+v),  w = 2 sqrt(v)/(1+v) = sqrt(1-c^2).
inline LandenResiduals landen_check(double b) {
  if (!(b > 0.0 && b < 1.0)) throw std::domain_error("b must lie in (0, 1)");
  const double k = std::sqrt((1.0 - b) * (1.0 + b));
  const double q = (1.0 - b) / (1.0 + b);
  const double v = 2.0 * std::sqrt(b) / (1.0 + b);
  // 1 - v = (1 - sqrt b)^2 / (1 + b), without cancellation for b near 1
  const double one_minus_sqrt_b = (1.0 - b) / (1.0 + std::sqrt(b));
  const double one_minus_v = one_minus_sqrt_b * one_minus_sqrt_b / (1.0 + b);
  const double c = one_minus_v / (1.0 + v);
  const double w = 2.0 * std::sqrt(v) / (1.0 + v);

  // K of a modulus from its complement; each pair (x, x') below satisfies
  // x^2 + x'^2 = 1: (k, b), (q, v), (c, w).
  auto K_by_complement = [](double comp) { return ref_complete_from_complement(comp).K; };
  const cplx Kk = K_by_complement(b), Kb = K_by_complement(k);
  const cplx Kq = K_by_complement(v), Kv = K_by_complement(q);
  const cplx Kc = K_by_complement(w), Kw = K_by_complement(c);
  return {std::abs(Kk * Kv - 2.0 * Kb * Kq), std::abs(Kk * Kw - 4.0 * Kb * Kc)};
}

struct AmplitudeValues {
  double sinphi;
  double F;      ///< F(phi, k), principal
  double E_inc;  ///< E(phi, k)
  double Z;      ///< Jacobi Zeta
};

/// Principal values at modulus k and complementary modulus b, plus the
/// incomplete integrals at one amplitude when requested.
struct ReferenceSet {
  double k;
  double b;
  cplx K_k, K_b, E_k, E_b;
  cplx N_b2;  ///< E(k)/K(k)
  cplx N_k2;  ///< E(b)/K(b)
  cplx qZ;    ///< 2 pi i / K(k)
  std::optional<AmplitudeValues> amplitude;

  /// E(k)K(b) + E(b)K(k) - K(k)K(b) - pi/2
  double legendre_residual() const {
    return std::abs(E_k * K_b + E_b * K_k - K_k * K_b - std::numbers::pi / 2.0);
  }
};

inline ReferenceSet reference_set(double b, std::optional<double> sinphi = std::nullopt) {
  if (!(b > 0.0 && b < 1.0)) throw std::domain_error("b must lie in (0, 1)");
  ReferenceSet r;
  r.b = b;
  r.k = std::sqrt((1.0 - b) * (1.0 + b));
  const CompleteIntegrals at_k = ref_complete_from_complement(b);
  const CompleteIntegrals at_b = ref_complete_from_complement(r.k);
  r.K_k = at_k.K;
  r.E_k = at_k.E;
  r.K_b = at_b.K;
  r.E_b = at_b.E;
  r.N_b2 = r.E_k / r.K_k;
  r.N_k2 = r.E_b / r.K_b;
  r.qZ = cplx{0.0, 2.0 * std::numbers::pi} / r.K_k;
  if (sinphi) {
    if (!(*sinphi > 0.0 && *sinphi <= 1.0))
      throw std::domain_error("reference amplitude needs 0 < sinphi <= 1");
    const double phi = std::asin(*sinphi);
    AmplitudeValues amp{*sinphi, quad_F(phi, r.k), quad_E_inc(phi, r.k), 0.0};
    amp.Z = amp.E_inc - amp.F * (r.E_k.real() / r.K_k.real());
    r.amplitude = amp;
  }
  return r;
}

}  // namespace eagm
