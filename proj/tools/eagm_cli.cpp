// eagm: point clouds of AGM multivalues and checks against their predicted loci.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "eagm/eagm.hpp"
#include "eagm/io.hpp"

namespace {

using namespace eagm;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by the fill-* and verify subcommands.  Unset values fall back
// to the per-command defaults.
struct Flags {
  std::optional<double> b, k, sinphi;
  int signb = 1;
  std::optional<unsigned> sigma_bits, delta_bits, gamma_bits;
  int max_iter = 20;
  double conv_tol = 1e-12;
  std::string format = "csv";
  std::string out;
  std::string svg;
};

struct CommandDefaults {
  FunctionKind kind;
  double sinphi;
  unsigned sigma_bits, delta_bits, gamma_bits;
  bool with_negative_b;
};

const std::map<std::string, CommandDefaults>& command_defaults() {
  static const std::map<std::string, CommandDefaults> table = {
      {"fill-k", {FunctionKind::K, 0.5, 5, 0, 0, true}},
      {"fill-f", {FunctionKind::F, 0.8, 3, 4, 0, false}},
      {"fill-e", {FunctionKind::E, 0.5, 5, 0, 0, false}},
      {"fill-n", {FunctionKind::N, 0.5, 5, 0, 0, false}},
      {"fill-z", {FunctionKind::Z, 0.8, 2, 2, 2, false}},
      {"fill-z-restricted", {FunctionKind::ZRestricted, 0.8, 0, 4, 0, false}},
  };
  return table;
}

// verify kind -> fill subcommand and whether the -b series is included
const std::map<std::string, std::pair<std::string, bool>>& verify_kinds() {
  static const std::map<std::string, std::pair<std::string, bool>> table = {
      {"k", {"fill-k", false}},      {"k-both", {"fill-k", true}},
      {"f", {"fill-f", false}},      {"e", {"fill-e", false}},
      {"n", {"fill-n", false}},      {"z-restricted", {"fill-z-restricted", false}},
  };
  return table;
}

void add_modulus_flags(CLI::App* cmd, Flags& f) {
  auto* b = cmd->add_option("--b", f.b, "complementary modulus b (default 0.25)");
  auto* k = cmd->add_option("--k", f.k, "modulus k; b = sqrt(1 - k^2)");
  b->excludes(k);
}

void add_cloud_flags(CLI::App* cmd, Flags& f) {
  add_modulus_flags(cmd, f);
  cmd->add_option("--sinphi", f.sinphi, "sine of the amplitude");
  cmd->add_option("--signb", f.signb, "sign applied to b")->check(CLI::IsMember({-1, 1}));
  cmd->add_option("--sigma-bits", f.sigma_bits, "free sigma bits");
  cmd->add_option("--delta-bits", f.delta_bits, "free delta bits");
  cmd->add_option("--gamma-bits", f.gamma_bits, "free gamma bits");
  cmd->add_option("--max-iter", f.max_iter, "EAGM iterations")->check(CLI::PositiveNumber);
  cmd->add_option("--conv-tol", f.conv_tol, "relative convergence tolerance")
      ->check(CLI::PositiveNumber);
}

double resolve_b(const Flags& f) {
  if (f.b) return *f.b;
  if (f.k) {
    if (!(*f.k >= 0.0 && *f.k < 1.0)) throw UsageError("--k must lie in [0, 1)");
    return std::sqrt((1.0 - *f.k) * (1.0 + *f.k));
  }
  return 0.25;
}

CloudRequest make_request(const Flags& f, const CommandDefaults& fig) {
  CloudRequest req;
  req.kind = fig.kind;
  req.params = EagmParams::from_b(resolve_b(f), f.sinphi.value_or(fig.sinphi));
  req.params.signb = f.signb < 0 ? Sign::minus : Sign::plus;
  req.params.max_iter = f.max_iter;
  req.params.conv_tol = f.conv_tol;
  req.sigma_bits = f.sigma_bits.value_or(fig.sigma_bits);
  req.delta_bits = f.delta_bits.value_or(fig.delta_bits);
  req.gamma_bits = f.gamma_bits.value_or(fig.gamma_bits);
  req.with_negative_b = fig.with_negative_b;
  const auto limit = static_cast<unsigned>(req.params.max_iter);
  if (req.sigma_bits > limit || req.delta_bits > limit || req.gamma_bits > limit)
    throw UsageError("sign bits must not exceed --max-iter");
  return req;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << text;
}

int run_fill(const std::string& name, const Flags& f) {
  const auto& fig = command_defaults().at(name);
  const CloudRequest req = make_request(f, fig);
  const auto cloud = enumerate_cloud(req);

  std::ostringstream os;
  if (f.format == "json") {
    os << to_json(cloud).dump(2) << '\n';
  } else {
    write_csv(os, cloud);
  }
  emit(f.out, os.str());

  if (!f.svg.empty()) {
    std::ofstream svg(f.svg, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot open " + f.svg);
    write_svg(svg, cloud, name + "  " + std::string(to_string(req.kind)));
  }
  return 0;
}

int run_verify(const std::string& kind, double tol, const Flags& f) {
  const auto& [command, both] = verify_kinds().at(kind);
  CommandDefaults fig = command_defaults().at(command);
  fig.with_negative_b = both;
  const CloudRequest req = make_request(f, fig);
  const double b = req.params.b.real();
  if (!(b > 0.0 && b < 1.0)) throw UsageError("verify needs 0 < b < 1");

  const ReferenceSet refs = reference_set(b, req.params.sinphi.real());
  const Locus locus = predict_locus(req.kind, refs, both);
  const auto cloud = enumerate_cloud(req);
  const FitReport rep = fit_cloud(cloud, locus, tol);

  nlohmann::json j = {{"kind", kind},
                      {"points", cloud.size()},
                      {"locus", to_json(locus)},
                      {"report", to_json(rep)}};
  emit(f.out, j.dump(2) + "\n");
  std::cerr << (rep.passed ? "PASS" : "FAIL") << " kind=" << kind
            << " max_residual=" << format_real(rep.max_residual) << " tol=" << tol
            << " flagged=" << rep.flagged_excluded << '\n';
  return rep.passed ? 0 : 1;
}

int run_ref(const Flags& f) {
  const double b = resolve_b(f);
  const ReferenceSet refs = reference_set(b, f.sinphi);
  const LandenResiduals landen = landen_check(b);
  nlohmann::json j = to_json(refs);
  j["landen_residual_two"] = landen.two;
  j["landen_residual_four"] = landen.four;
  emit(f.out, j.dump(2) + "\n");
  return 0;
}

int run_magm(const Flags& f, int rows, unsigned width) {
  const double b = resolve_b(f);
  const MagmEquivalence eq = magm_equivalence(b, rows);
  auto sweep = nlohmann::json::array();
  for (const auto& o : magm_negative_sweep(b, width)) sweep.push_back(to_json(o));
  const MagmOutcome all_negative = magm_negative_experiment(b, ~std::uint64_t{0});
  nlohmann::json j = {{"b", b},
                      {"rows", rows},
                      {"max_row_deviation", eq.max_row_deviation},
                      {"limit", eq.limit.real()},
                      {"limit_deviation", eq.limit_deviation},
                      {"negative_sweep", sweep},
                      {"all_negative", to_json(all_negative)}};
  emit(f.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivalues of the arithmetic-geometric mean"};
  app.require_subcommand(1);

  Flags flags;
  std::map<std::string, CLI::App*> fill_cmds;
  const std::map<std::string, std::string> help = {
      {"fill-k", "K = pi/(2 AGM) over 32 sigma masks, for +b and -b"},
      {"fill-f", "F(phi,k) over 8 sigma x 16 delta masks"},
      {"fill-e", "E(k) over 32 sigma masks"},
      {"fill-n", "N = E/K over 32 sigma masks"},
      {"fill-z", "Jacobi Zeta over 4 x 4 x 4 sigma/delta/gamma masks"},
      {"fill-z-restricted", "Jacobi Zeta over 16 delta masks with gamma_n = delta_(n-1)"},
  };
  for (const auto& [name, text] : help) {
    auto* cmd = app.add_subcommand(name, text);
    add_cloud_flags(cmd, flags);
    cmd->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", flags.out, "output file (default stdout)");
    cmd->add_option("--svg", flags.svg, "also write an SVG scatter plot");
    fill_cmds[name] = cmd;
  }

  std::string verify_kind;
  double verify_tol = default_fit_tol;
  auto* verify = app.add_subcommand("verify", "fit a cloud against its predicted locus");
  add_cloud_flags(verify, flags);
  verify->add_option("--kind", verify_kind, "k, k-both, f, e, n or z-restricted")
      ->required()
      ->check(CLI::IsMember({"k", "k-both", "f", "e", "n", "z-restricted"}));
  verify->add_option("--tol", verify_tol, "absolute residual tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--out", flags.out, "report file (default stdout)");

  int magm_rows = 20;
  unsigned magm_width = 4;
  auto* magm = app.add_subcommand("magm-check", "MAGM against the Gauss series and sign flips");
  add_modulus_flags(magm, flags);
  magm->add_option("--rows", magm_rows, "rows compared")->check(CLI::NonNegativeNumber);
  magm->add_option("--width", magm_width, "sign-mask width of the negative sweep")
      ->check(CLI::Range(0, 16));
  magm->add_option("--out", flags.out, "output file (default stdout)");

  auto* ref = app.add_subcommand("ref", "reference values and identity residuals");
  add_modulus_flags(ref, flags);
  ref->add_option("--sinphi", flags.sinphi, "also evaluate the incomplete integrals");
  ref->add_option("--out", flags.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& [name, cmd] : fill_cmds)
      if (cmd->parsed()) return run_fill(name, flags);
    if (verify->parsed()) return run_verify(verify_kind, verify_tol, flags);
    if (magm->parsed()) return run_magm(flags, magm_rows, magm_width);
    if (ref->parsed()) return run_ref(flags);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
