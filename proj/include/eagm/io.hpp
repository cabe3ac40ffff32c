#pragma once

// Serialization of clouds, fit reports and reference values.
//
// CSV columns: series, sigma_mask, delta_mask, gamma_mask, signb,
// generation, re, im, ill_conditioned, duplicate_of.  Reals are printed
// with 17 significant digits so output is byte-stable for fixed input.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "enumerator.hpp"
#include "lattice.hpp"
#include "magm.hpp"
#include "reference.hpp"

namespace eagm {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string_view series_name(Sign signb) { return signb == Sign::plus ? "b+" : "b-"; }

inline void write_csv(std::ostream& os, std::span<const MultivaluePoint> cloud) {
  os << "series,sigma_mask,delta_mask,gamma_mask,signb,generation,re,im,ill_conditioned,"
        "duplicate_of\n";
  for (const auto& p : cloud) {
    os << series_name(p.signb) << ',' << p.schedule.sigma_mask << ',' << p.schedule.delta_mask
       << ',' << p.schedule.gamma_mask << ',' << static_cast<int>(p.signb) << ','
       << p.generation << ',' << format_real(p.value.real()) << ','
       << format_real(p.value.imag()) << ',' << (p.ill_conditioned ? 1 : 0) << ',';
    if (p.duplicate_of) os << *p.duplicate_of;
    os << '\n';
  }
}

namespace detail {

// JSON has no NaN/Inf; such values become null.
inline nlohmann::json real_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

inline nlohmann::json cplx_json(cplx z) {
  return {{"re", real_json(z.real())}, {"im", real_json(z.imag())}};
}

}  // namespace detail

inline nlohmann::json to_json(std::span<const MultivaluePoint> cloud) {
  auto arr = nlohmann::json::array();
  for (const auto& p : cloud) {
    arr.push_back({{"series", series_name(p.signb)},
                   {"sigma_mask", p.schedule.sigma_mask},
                   {"delta_mask", p.schedule.delta_mask},
                   {"gamma_mask", p.schedule.gamma_mask},
                   {"signb", static_cast<int>(p.signb)},
                   {"generation", p.generation},
                   {"re", detail::real_json(p.value.real())},
                   {"im", detail::real_json(p.value.imag())},
                   {"ill_conditioned", p.ill_conditioned},
                   {"duplicate_of", p.duplicate_of ? nlohmann::json(*p.duplicate_of)
                                                   : nlohmann::json(nullptr)}});
  }
  return arr;
}

inline nlohmann::json to_json(const Locus& locus) {
  if (const auto* lat = std::get_if<LatticeSpec>(&locus)) {
    auto cosets = nlohmann::json::array();
    for (cplx c : lat->cosets) cosets.push_back(detail::cplx_json(c));
    return {{"type", "lattice"},
            {"origin", detail::cplx_json(lat->origin)},
            {"gen1", detail::cplx_json(lat->gen1)},
            {"gen2", detail::cplx_json(lat->gen2)},
            {"cosets", cosets}};
  }
  const auto& c = std::get<CircleSpec>(locus);
  return {{"type", "circle"},
          {"x1", c.x1},
          {"x2", c.x2},
          {"center", c.center()},
          {"radius", c.radius()}};
}

inline nlohmann::json to_json(const FitReport& rep) {
  auto pts = nlohmann::json::array();
  for (const auto& p : rep.points)
    pts.push_back({{"m", p.m},
                   {"n", p.n},
                   {"coset", p.coset},
                   {"residual", detail::real_json(p.residual)},
                   {"excluded", p.excluded}});
  return {{"points", pts},
          {"max_residual", detail::real_json(rep.max_residual)},
          {"worst_point", rep.worst_point ? nlohmann::json(*rep.worst_point)
                                          : nlohmann::json(nullptr)},
          {"flagged_excluded", rep.flagged_excluded},
          {"tol", rep.tol},
          {"passed", rep.passed}};
}

inline nlohmann::json to_json(const ReferenceSet& r) {
  nlohmann::json j = {{"k", r.k},
                      {"b", r.b},
                      {"K_k", detail::cplx_json(r.K_k)},
                      {"K_b", detail::cplx_json(r.K_b)},
                      {"E_k", detail::cplx_json(r.E_k)},
                      {"E_b", detail::cplx_json(r.E_b)},
                      {"N_b2", detail::cplx_json(r.N_b2)},
                      {"N_k2", detail::cplx_json(r.N_k2)},
                      {"qZ", detail::cplx_json(r.qZ)},
                      {"legendre_residual", r.legendre_residual()}};
  if (r.amplitude) {
    j["amplitude"] = {{"sinphi", r.amplitude->sinphi},
                      {"F", r.amplitude->F},
                      {"E_inc", r.amplitude->E_inc},
                      {"Z", r.amplitude->Z}};
  }
  return j;
}

inline nlohmann::json to_json(const MagmOutcome& o) {
  return {{"sign_mask", o.sign_mask},
          {"rows", o.rows},
          {"converged", o.converged},
          {"x", detail::cplx_json(o.last.x)},
          {"y", detail::cplx_json(o.last.y)},
          {"lattice_distance", o.lattice_distance ? detail::real_json(*o.lattice_distance)
                                                  : nlohmann::json(nullptr)}};
}

/// Standalone SVG scatter: one circle per finite point, labelled with its
/// generation; -b points are drawn black.
inline void write_svg(std::ostream& os, std::span<const MultivaluePoint> cloud,
                      std::string_view title) {
  constexpr double width = 800.0, height = 800.0, margin = 60.0;
  static constexpr const char* palette[] = {"#000000", "#1f77b4", "#2ca02c", "#d62728",
                                            "#9467bd", "#17becf", "#ff7f0e", "#8c564b"};
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const auto& p : cloud) {
    if (!is_finite(p.value)) continue;
    lo_x = std::min(lo_x, p.value.real());
    hi_x = std::max(hi_x, p.value.real());
    lo_y = std::min(lo_y, p.value.imag());
    hi_y = std::max(hi_y, p.value.imag());
  }
  if (!(lo_x <= hi_x)) lo_x = lo_y = -1.0, hi_x = hi_y = 1.0;
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  const double scale = (width - 2.0 * margin) / span;
  auto px = [&](double x) { return width / 2.0 + (x - cx) * scale; };
  auto py = [&](double y) { return height / 2.0 - (y - cy) * scale; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << margin << "\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";
  os << "<line x1=\"0\" y1=\"" << format_real(py(0.0)) << "\" x2=\"" << width << "\" y2=\""
     << format_real(py(0.0)) << "\" stroke=\"#bbbbbb\"/>\n";
  os << "<line x1=\"" << format_real(px(0.0)) << "\" y1=\"0\" x2=\"" << format_real(px(0.0))
     << "\" y2=\"" << height << "\" stroke=\"#bbbbbb\"/>\n";
  for (const auto& p : cloud) {
    if (!is_finite(p.value)) continue;
    const std::string x = format_real(px(p.value.real()));
    const std::string y = format_real(py(p.value.imag()));
    const char* color = p.signb == Sign::minus ? palette[0] : palette[1 + p.generation % 7];
    os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    if (p.signb == Sign::plus)
      os << "<text x=\"" << format_real(px(p.value.real()) + 6.0) << "\" y=\"" << y
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << p.generation << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace eagm
