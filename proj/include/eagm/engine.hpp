#pragma once

// Extended AGM (EAGM) on the quartet (a, g, u, v) with explicit sign
// schedules.  One trace yields K, F, E and the Jacobi Zeta function for the
// chosen branch of every square root.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "complex_core.hpp"

namespace eagm {

struct EagmParams {
  cplx k{0.0, 0.0};       ///< modulus
  cplx b{1.0, 0.0};       ///< complementary modulus, k^2 + b^2 = 1
  cplx sinphi{1.0, 0.0};  ///< sine of the amplitude, nonzero
  Sign signb = Sign::plus;
  int max_iter = 20;
  double conv_tol = 1e-12;
  double collapse_tol = 1e-6;  ///< |a_inf| below this (relative to a_0 = 1) is a collapse

  static EagmParams from_k(cplx k, cplx sinphi = 1.0) {
    EagmParams p;
    p.k = k;
    p.b = principal_sqrt((1.0 - k) * (1.0 + k));
    p.sinphi = sinphi;
    return p;
  }

  static EagmParams from_b(cplx b, cplx sinphi = 1.0) {
    EagmParams p;
    p.b = b;
    p.k = principal_sqrt((1.0 - b) * (1.0 + b));
    p.sinphi = sinphi;
    return p;
  }

  void validate() const {
    if (sinphi == cplx{0.0, 0.0}) throw std::invalid_argument("sinphi must be nonzero");
    if (!is_finite(k) || !is_finite(b) || !is_finite(sinphi))
      throw std::invalid_argument("parameters must be finite");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(conv_tol > 0.0)) throw std::invalid_argument("conv_tol must be > 0");
  }
};

/// Root-sign choices for each iteration.  Bit j set means the sign for
/// iteration j is -1: sigma for r_n, delta for s_n, gamma for the Zeta root.
struct SignSchedule {
  std::uint64_t sigma_mask = 0;
  std::uint64_t delta_mask = 0;
  std::uint64_t gamma_mask = 0;

  static constexpr Sign bit(std::uint64_t mask, int j) noexcept {
    if (j < 0 || j >= 64) return Sign::plus;
    return (mask >> j) & 1u ? Sign::minus : Sign::plus;
  }
  constexpr Sign sigma(int j) const noexcept { return bit(sigma_mask, j); }
  constexpr Sign delta(int j) const noexcept { return bit(delta_mask, j); }
  constexpr Sign gamma(int j) const noexcept { return bit(gamma_mask, j); }

  friend constexpr bool operator==(const SignSchedule&, const SignSchedule&) = default;
};

/// One row of the recursion.  Besides the quartet, a row carries sums and
/// differences that would otherwise be formed by cancellation; each equals
/// the expression in its name.
struct EagmRow {
  cplx a, g, u, v;
  cplx a_plus_g, a_minus_g;
  cplx u_plus_v, u_minus_v;
  cplx u_minus_a, v_minus_g;

  static EagmRow from_quartet(cplx a, cplx g, cplx u, cplx v) {
    return {a, g, u, v, a + g, a - g, u + v, u - v, u - a, v - g};
  }

  bool finite() const {
    return is_finite(a) && is_finite(g) && is_finite(u) && is_finite(v) &&
           is_finite(a_plus_g) && is_finite(a_minus_g) && is_finite(u_plus_v) &&
           is_finite(u_minus_v) && is_finite(u_minus_a) && is_finite(v_minus_g);
  }
};

/// Residual of a^2 - g^2 = u^2 - v^2 on the plain quartet, relative to the
/// largest squared magnitude among a, g, u, v.
inline double identity_residual(const EagmRow& r) {
  const cplx lhs = r.a * r.a - r.g * r.g;
  const cplx rhs = r.u * r.u - r.v * r.v;
  const double scale =
      std::max({std::norm(r.a), std::norm(r.g), std::norm(r.u), std::norm(r.v), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

namespace detail {

// {x + y, x - y} given x^2 - y^2.  The larger-magnitude member is formed
// directly and the other from the product.
inline std::pair<cplx, cplx> sum_and_difference(cplx x, cplx y, cplx x2_minus_y2) {
  const cplx sum = x + y;
  const cplx diff = x - y;
  if (std::abs(sum) >= std::abs(diff)) {
    if (sum == cplx{0.0, 0.0}) return {sum, diff};
    return {sum, x2_minus_y2 / sum};
  }
  return {x2_minus_y2 / diff, diff};
}

// {1 + x, 1 - x} given 1 - x^2.
inline std::pair<cplx, cplx> one_plus_minus(cplx x, cplx one_minus_x2) {
  return sum_and_difference(cplx{1.0, 0.0}, x, one_minus_x2);
}

}  // namespace detail

struct StepResult {
  EagmRow row;
  bool degenerate = false;  ///< a·g = 0 or u+v = 0 while selecting a root
};

/// One EAGM iteration:
/// ((a+g)/2, sigma·near_root(a,g), (u+v)/2, delta·forward_s_root(u,v,a,g)).
inline StepResult eagm_step(const EagmRow& row, Sign sigma, Sign delta) {
  const cplx half_a = row.a_plus_g / 2.0;
  const cplx half_u = row.u_plus_v / 2.0;
  const cplx near = near_root(row.a, row.g, row.a_plus_g);
  const cplx fwd = forward_s_root_from(row.u_plus_v, row.a_minus_g);

  // (half_a ± near)(half_a ∓ near) = (a-g)^2/4, and likewise for the u side.
  const cplx quarter = row.a_minus_g * row.a_minus_g / 4.0;
  const auto [a_far, a_near] = detail::sum_and_difference(half_a, near, quarter);
  const auto [u_far, u_near] = detail::sum_and_difference(half_u, fwd, quarter);

  // fwd^2 - near^2 = ((u+v)^2 - (a+g)^2)/4, with (u+v) - (a+g) = (u-a) + (v-g).
  const cplx e_plus_f = row.u_minus_a + row.v_minus_g;
  const cplx roots_sq_diff = e_plus_f * (row.u_plus_v + row.a_plus_g) / 4.0;
  const auto [roots_sum, roots_diff] = detail::sum_and_difference(fwd, near, roots_sq_diff);

  StepResult out;
  EagmRow& n = out.row;
  n.a = half_a;
  n.u = half_u;
  n.g = apply(sigma, near);
  n.v = apply(delta, fwd);
  if (sigma == Sign::plus) {
    n.a_plus_g = a_far;
    n.a_minus_g = a_near;
  } else {
    n.a_plus_g = a_near;
    n.a_minus_g = a_far;
  }
  if (delta == Sign::plus) {
    n.u_plus_v = u_far;
    n.u_minus_v = u_near;
  } else {
    n.u_plus_v = u_near;
    n.u_minus_v = u_far;
  }
  n.u_minus_a = e_plus_f / 2.0;
  // v' - g' = delta·fwd - sigma·near
  n.v_minus_g = sigma == delta ? apply(delta, roots_diff) : apply(delta, roots_sum);

  out.degenerate = row.a * row.g == cplx{0.0, 0.0} || row.u_plus_v == cplx{0.0, 0.0};
  return out;
}

struct EagmTrace {
  std::vector<EagmRow> rows;  ///< rows[0] is the initial quartet
  cplx s_sum{0.0, 0.0};       ///< sum of 2^(n-1) (a_n^2 - g_n^2)
  cplx z_sum{0.0, 0.0};       ///< Jacobi Zeta series
  cplx a_inf{0.0, 0.0};
  cplx u_inf{0.0, 0.0};
  bool converged = false;
  bool degenerate = false;      ///< some root selection hit a zero argument
  bool zeta_undefined = false;  ///< u_n = 0 at some Zeta term
  bool ill_conditioned = false;
};

/// Initial quartet (1, ±b, 1/sinphi, ±Delta/sinphi), Delta = sqrt(1 - k^2 sin^2 phi).
inline EagmRow initial_row(const EagmParams& p) {
  const cplx s = p.sinphi;
  const cplx k2 = p.k * p.k;
  const cplx delta = principal_sqrt(p.b * p.b + k2 * (1.0 - s) * (1.0 + s));
  const double sb = to_double(p.signb);

  EagmRow r;
  r.a = 1.0;
  r.g = sb * p.b;
  r.u = 1.0 / s;
  r.v = sb * delta / s;

  auto [one_plus_b, one_minus_b] = detail::one_plus_minus(p.b, k2);
  auto [one_plus_d, one_minus_d] = detail::one_plus_minus(delta, k2 * s * s);
  if (p.signb == Sign::minus) {
    std::swap(one_plus_b, one_minus_b);
    std::swap(one_plus_d, one_minus_d);
  }
  r.a_plus_g = one_plus_b;
  r.a_minus_g = one_minus_b;
  r.u_plus_v = one_plus_d / s;
  r.u_minus_v = one_minus_d / s;
  r.u_minus_a = (1.0 - s) / s;
  // delta^2 - (b s)^2 = (1 - s)(1 + s)
  const cplx d_minus_bs =
      detail::sum_and_difference(delta, p.b * s, (1.0 - s) * (1.0 + s)).second;
  r.v_minus_g = sb * d_minus_bs / s;
  return r;
}

/// Runs max_iter EAGM steps under `schedule`.  The S and Zeta terms of row n
/// are accumulated before stepping to row n+1.  Non-finite intermediates end
/// the iteration and mark the trace ill-conditioned; nothing throws after
/// parameter validation.
inline EagmTrace run_eagm(const EagmParams& params, const SignSchedule& schedule) {
  params.validate();

  EagmTrace t;
  t.rows.reserve(static_cast<std::size_t>(params.max_iter) + 1);
  t.rows.push_back(initial_row(params));

  bool finite = t.rows.back().finite();
  double weight = 1.0;  // 2^n
  for (int j = 0; j < params.max_iter && finite; ++j) {
    const EagmRow& r = t.rows.back();
    t.s_sum += r.a_minus_g * r.a_plus_g * (weight / 2.0);
    if (r.u == cplx{0.0, 0.0}) {
      t.zeta_undefined = true;
    } else {
      const cplx w = apply(schedule.gamma(j), zeta_root(r.u, r.a));
      t.z_sum += weight * r.u_minus_v * w / r.u;
    }

    StepResult step = eagm_step(r, schedule.sigma(j), schedule.delta(j));
    t.degenerate = t.degenerate || step.degenerate;
    finite = step.row.finite() && is_finite(t.s_sum) && is_finite(t.z_sum);
    t.rows.push_back(step.row);
    weight *= 2.0;
  }

  const EagmRow& last = t.rows.back();
  t.a_inf = last.a;
  t.u_inf = last.u;
  const double gap_tol = params.conv_tol * std::abs(last.a);
  t.converged = finite && std::abs(last.a_minus_g) <= gap_tol &&
                std::abs(last.u_minus_v) <= gap_tol;
  t.ill_conditioned = !finite || !t.converged || t.degenerate ||
                      std::abs(t.a_inf) < params.collapse_tol;
  return t;
}

/// K = pi / (2 a_inf).  Check `trace.ill_conditioned` before trusting it.
inline cplx complete_K(const EagmTrace& trace) {
  return std::numbers::pi / (2.0 * trace.a_inf);
}

/// Incomplete integral of the first kind on arcsine branch `branch`:
/// even n gives (asin_p + n·pi)/a_inf, odd m gives (-asin_p + m·pi)/a_inf.
inline cplx incomplete_F(const EagmTrace& trace, long branch = 0) {
  if (trace.u_inf == cplx{0.0, 0.0})
    throw std::domain_error("amplitude limit degenerate");
  const cplx principal = std::asin(trace.a_inf / trace.u_inf);
  const double shift = static_cast<double>(branch) * std::numbers::pi;
  const cplx angle = (branch % 2 == 0) ? principal + shift : -principal + shift;
  return angle / trace.a_inf;
}

/// E = K (1 - S).
inline cplx complete_E(const EagmTrace& trace) {
  return complete_K(trace) * (1.0 - trace.s_sum);
}

inline cplx jacobi_Z(const EagmTrace& trace) {
  if (trace.zeta_undefined) throw std::domain_error("zeta root undefined at u=0");
  return trace.z_sum;
}

}  // namespace eagm
