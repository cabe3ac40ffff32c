#pragma once

// Sweeps over sign schedules, producing the multivalue point clouds of
// K, F, E, N = E/K and the Jacobi Zeta function.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "engine.hpp"

namespace eagm {

enum class FunctionKind { K, F, E, N, Z, ZRestricted };

inline std::string_view to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::K: return "K";
    case FunctionKind::F: return "F";
    case FunctionKind::E: return "E";
    case FunctionKind::N: return "N";
    case FunctionKind::Z: return "Z";
    case FunctionKind::ZRestricted: return "Z_restricted";
  }
  return "?";
}

struct CloudRequest {
  FunctionKind kind = FunctionKind::K;
  EagmParams params;
  unsigned sigma_bits = 0;
  unsigned delta_bits = 0;
  unsigned gamma_bits = 0;
  /// Also emit the series started from -b (K, E and N sweeps).
  bool with_negative_b = false;

  std::size_t point_count() const {
    const unsigned bits = kind == FunctionKind::ZRestricted
                              ? delta_bits
                              : sigma_bits + delta_bits + gamma_bits;
    return (std::size_t{1} << bits) * (with_negative_b ? 2u : 1u);
  }
};

struct MultivaluePoint {
  cplx value;
  SignSchedule schedule;
  Sign signb = Sign::plus;
  int generation = 0;
  bool ill_conditioned = false;
  std::optional<std::size_t> duplicate_of;
};

/// Number of the last iteration carrying a non-trivial sign choice
/// (1-based), 0 for the all-plus schedule.  For a sigma-only sweep with mask
/// j this is 1 + floor(log2 j).
inline int generation_of(const SignSchedule& s) {
  const std::uint64_t all = s.sigma_mask | s.delta_mask | s.gamma_mask;
  return static_cast<int>(std::bit_width(all));
}

/// Zeta schedule with gamma_n = delta_{n-1} and no sigma flips.
constexpr SignSchedule restricted_zeta_schedule(std::uint64_t delta_mask) {
  return {0, delta_mask, delta_mask << 1};
}

/// Relative distance below which two cloud points count as the same value.
inline constexpr double duplicate_rel_tol = 1e-9;

namespace detail {

inline cplx extract(FunctionKind kind, const EagmTrace& trace, bool& flagged) {
  switch (kind) {
    case FunctionKind::K: return complete_K(trace);
    case FunctionKind::F:
      if (trace.u_inf == cplx{0.0, 0.0}) break;
      return incomplete_F(trace, 0);
    case FunctionKind::E: return complete_E(trace);
    case FunctionKind::N: return 1.0 - trace.s_sum;
    case FunctionKind::Z:
    case FunctionKind::ZRestricted:
      if (trace.zeta_undefined) break;
      return jacobi_Z(trace);
  }
  flagged = true;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

// Sets duplicate_of on every point lying within tol·scale of an earlier one.
inline void mark_duplicates(std::vector<MultivaluePoint>& pts) {
  double scale = 0.0;
  for (const auto& p : pts)
    if (is_finite(p.value)) scale = std::max(scale, std::abs(p.value));
  if (scale == 0.0) scale = 1.0;
  const double tol = duplicate_rel_tol * scale;

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (is_finite(pts[i].value)) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return pts[x].value.real() < pts[y].value.real() ||
           (pts[x].value.real() == pts[y].value.real() && x < y);
  });
  for (std::size_t p = 0; p < order.size(); ++p) {
    for (std::size_t q = p + 1; q < order.size(); ++q) {
      const std::size_t i = order[p], j = order[q];
      if (pts[j].value.real() - pts[i].value.real() >= tol) break;
      if (std::abs(pts[j].value - pts[i].value) >= tol) continue;
      const std::size_t first = std::min(i, j), later = std::max(i, j);
      auto& dup = pts[later].duplicate_of;
      if (!dup || first < *dup) dup = first;
    }
  }
}

}  // namespace detail

/// Runs one EAGM trace per schedule and extracts the requested function.
/// Masks are visited in descending order, sigma outermost, then delta, then
/// gamma; with `with_negative_b` each +b point is followed by its -b partner.
/// Ill-conditioned points stay in the output, flagged.
inline std::vector<MultivaluePoint> enumerate_cloud(const CloudRequest& req) {
  req.params.validate();
  const bool restricted = req.kind == FunctionKind::ZRestricted;
  const unsigned sb = restricted ? 0u : req.sigma_bits;
  const unsigned db = req.delta_bits;
  const unsigned gb = restricted ? 0u : req.gamma_bits;
  const unsigned max_iter = static_cast<unsigned>(req.params.max_iter);
  if (sb > max_iter || db > max_iter || gb > max_iter)
    throw std::invalid_argument("sign bits exceed max_iter");
  if (sb + db + gb > 20) throw std::invalid_argument("at most 20 free sign bits per cloud");

  std::vector<Sign> signs{req.params.signb};
  if (req.with_negative_b) signs.push_back(flip(req.params.signb));

  std::vector<MultivaluePoint> out;
  out.reserve(req.point_count());
  for (std::uint64_t s = (std::uint64_t{1} << sb); s-- > 0;) {
    for (std::uint64_t d = (std::uint64_t{1} << db); d-- > 0;) {
      for (std::uint64_t g = (std::uint64_t{1} << gb); g-- > 0;) {
        const SignSchedule schedule = restricted ? restricted_zeta_schedule(d)
                                                 : SignSchedule{s, d, g};
        for (Sign signb : signs) {
          EagmParams params = req.params;
          params.signb = signb;
          const EagmTrace trace = run_eagm(params, schedule);
          MultivaluePoint pt;
          pt.schedule = schedule;
          pt.signb = signb;
          pt.generation = generation_of(schedule);
          pt.ill_conditioned = trace.ill_conditioned;
          pt.value = detail::extract(req.kind, trace, pt.ill_conditioned);
          out.push_back(pt);
        }
      }
    }
  }
  detail::mark_duplicates(out);
  return out;
}

/// Points of `cloud` lying within duplicate tolerance of an earlier point.
inline std::size_t duplicate_count(const std::vector<MultivaluePoint>& cloud) {
  return static_cast<std::size_t>(std::count_if(
      cloud.begin(), cloud.end(), [](const MultivaluePoint& p) { return p.duplicate_of.has_value(); }));
}

}  // namespace eagm
