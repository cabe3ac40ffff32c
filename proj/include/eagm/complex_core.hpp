#pragma once

// Square-root branch selection for the multivalued AGM.
//
// Every geometric mean in the library goes through one of the selectors
// below.  Each returns the root singled out by its convention; callers
// negate it to reach the other branch.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace eagm {

using cplx = std::complex<double>;

/// Sign choice for one square root.  `plus` keeps the conventional root.
enum class Sign : int { minus = -1, plus = 1 };

constexpr double to_double(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign flip(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }

inline cplx apply(Sign s, cplx z) noexcept { return s == Sign::plus ? z : -z; }

inline bool is_finite(cplx z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Principal branch: Re(w) >= 0, and Im(w) >= 0 when Re(w) == 0.
inline cplx principal_sqrt(cplx z) {
  cplx w = std::sqrt(z);
  // std::sqrt follows the sign of a signed zero imaginary part; normalize
  // so that -1 and -1-0i both map to +i.
  if (w.real() == 0.0 && w.imag() < 0.0) w = -w;
  if (w.real() == 0.0 && w.imag() == 0.0) return {0.0, 0.0};
  return w;
}

namespace detail {

// Orient `root` so that Re(root / ref) >= 0.  Exact zero of the tested real
// part counts as a tie and is settled by `tie`.
template <typename TieRule>
cplx orient(cplx root, cplx ref, TieRule tie) {
  if (ref == cplx{0.0, 0.0}) return tie(root);
  const double t = (root / ref).real();
  if (t > 0.0) return root;
  if (t < 0.0) return -root;
  return tie(root);
}

inline cplx positive_imag(cplx r) { return r.imag() < 0.0 ? -r : r; }
inline cplx keep_principal(cplx r) { return r; }

}  // namespace detail

/// Geometric mean of a and g nearer the arithmetic mean, i.e. the root r of
/// a·g with Re(r/(a+g)) >= 0.  Ties (including a+g = 0) go to the root with
/// positive imaginary part.  Returns 0 when a·g = 0.
///
/// The three-argument form takes a+g precomputed, which lets the EAGM pass an
/// accurately carried sum instead of a cancelling one.
inline cplx near_root(cplx a, cplx g, cplx a_plus_g) {
  const cplx prod = a * g;
  if (prod == cplx{0.0, 0.0}) return {0.0, 0.0};
  return detail::orient(principal_sqrt(prod), a_plus_g, detail::positive_imag);
}

inline cplx near_root(cplx a, cplx g) { return near_root(a, g, a + g); }

/// s = sqrt((u+v)^2 - (a-g)^2)/2 oriented so that Re(s/(u+v)) >= 0, taking
/// u+v and a-g directly.  Ties and u+v = 0 keep the principal root.
inline cplx forward_s_root_from(cplx u_plus_v, cplx a_minus_g) {
  const cplx radicand = (u_plus_v - a_minus_g) * (u_plus_v + a_minus_g);
  return detail::orient(principal_sqrt(radicand) / 2.0, u_plus_v,
                        detail::keep_principal);
}

inline cplx forward_s_root(cplx u, cplx v, cplx a, cplx g) {
  return forward_s_root_from(u + v, a - g);
}

/// sqrt(u^2 - a^2) taken as the geometric mean of (u-a) and (u+a) nearest
/// their average u: Re(w/u) >= 0, ties keep the principal root.
inline cplx zeta_root(cplx u, cplx a) {
  if (u == cplx{0.0, 0.0}) throw std::domain_error("zeta root undefined at u=0");
  return detail::orient(principal_sqrt((u - a) * (u + a)), u, detail::keep_principal);
}

}  // namespace eagm
