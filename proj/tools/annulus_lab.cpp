// annulus_lab: batch front end for the annulus toolkit.
//
// Exit codes: 0 success, 2 refuted or failed verification, 1 usage or I/O error.
// Reports are JSON, written to --out or to stdout; diagnostics go to stderr.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annulus/annulus.hpp"

namespace {

using annulus::io::json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;

struct Common {
  double r = 0.5;
  std::uint64_t seed = 1;
  std::string out;
  annulus::Tolerances tol;
};

void emit(const Common& c, const json& report) {
  if (c.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    annulus::io::write_json_file(c.out, report);
  }
}

int input_error(const annulus::Error& e) {
  switch (e.code()) {
    case annulus::Errc::Parse:
    case annulus::Errc::BadRadius:
    case annulus::Errc::InvalidRational:
    case annulus::Errc::RootInClosedDisk:
    case annulus::Errc::RootOutsideInnerDisk:
    case annulus::Errc::NotSquare:
    case annulus::Errc::DimensionMismatch:
      return kUsage;
    default:
      return kFailed;
  }
}

void check_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) annulus::fail(annulus::Errc::BadRadius, "--r must lie in (0, 1)");
}

// -- commands ----------------------------------------------------------------

int run_certify(const Common& c, const std::string& matrix, int trials) {
  check_radius(c.r);
  const auto T = annulus::io::read_matrix(matrix);
  const auto rep = annulus::certify(T, c.r, trials, c.seed, c.tol);
  emit(c, annulus::io::to_json(rep));
  std::cerr << "verdict: " << annulus::to_string(rep.verdict) << " (max ratio " << rep.max_ratio << ")\n";
  const bool refuted = rep.verdict == annulus::Verdict::Refuted || rep.verdict == annulus::Verdict::WilliamsRefuted;
  return refuted ? kFailed : kOk;
}

int run_decompose(const Common& c, const std::string& matrix) {
  check_radius(c.r);
  const auto N = annulus::io::read_matrix(matrix);
  const auto d = annulus::decompose(N, c.r, c.tol);
  json report = annulus::io::to_json(d);
  report["version"] = annulus::io::version;
  emit(c, report);
  return kOk;
}

int run_dilate(const Common& c, const std::string& matrix, const std::string& matrix2, int d, int M) {
  check_radius(c.r);
  const auto T1 = annulus::io::read_matrix(matrix);
  const auto T2 = matrix2.empty() ? annulus::involution(T1, c.r, c.tol) : annulus::io::read_matrix(matrix2);
  if (M <= 0) M = d + 1;
  if (d > M - 1) annulus::fail(annulus::Errc::BudgetExceeded, "degree budget d must be at most M - 1");
  const auto pair = annulus::ando_pair(T1, T2, M, c.tol);
  const auto words = annulus::word_residuals(pair, T1, T2, d);
  json table = json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    table.push_back(json{{"degree", k}, {"max_residual", words[k]}});
    worst = std::max(worst, words[k]);
  }
  const double comm = annulus::budget_commutator(pair);
  const double iso = annulus::budget_isometry_defect(pair);
  json report{{"version", annulus::io::version},
              {"r", c.r},
              {"d", d},
              {"M", M},
              {"dilation_dim", pair.space_dim()},
              {"G_unitarity_defect", annulus::unitarity_defect(pair.G)},
              {"budget_commutator", comm},
              {"budget_isometry_defect", iso},
              {"moments", std::move(table)}};
  emit(c, report);
  const double tol = c.tol.verify_tol;
  return worst <= tol && comm <= tol && iso <= tol ? kOk : kFailed;
}

int run_model_verify(const Common& c, const std::string& matrix, const std::vector<std::string>& functions,
                     std::optional<int> d, const std::string& model_dir) {
  check_radius(c.r);
  const auto T = annulus::io::read_matrix(matrix);
  std::vector<annulus::AnnulusRational> fs;
  for (const auto& path : functions) {
    auto f = annulus::io::read_rational(path);
    if (f.r != c.r) annulus::fail(annulus::Errc::InvalidRational, path + ": r differs from --r");
    annulus::validate(f);
    fs.push_back(std::move(f));
  }
  int budget = 1;
  if (d) {
    budget = *d;
  } else {
    for (const auto& f : fs) budget = std::max(budget, annulus::default_budget(f));
  }
  auto model = annulus::build_model(T, c.r, budget, c.tol);

  json rows = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    json row{{"function", functions[i]}};
    try {
      const auto v = annulus::verify_model(model, T, fs[i], c.tol.verify_tol, c.tol);
      const bool pass = v.residual <= v.tail.bound + c.tol.verify_tol && v.flip_residual == 0.0;
      row["residual"] = v.residual;
      row["tail_report"] = annulus::io::to_json(v.tail);
      row["flip_residual"] = v.flip_residual;
      row["pass"] = pass;
      ok = ok && pass;
      if (!model.tail_report || v.tail.bound > model.tail_report->bound) model.tail_report = v.tail;
    } catch (const annulus::Error& e) {
      if (e.code() != annulus::Errc::BudgetExceeded) throw;
      row["error"] = e.what();
      row["pass"] = false;
      ok = false;
    }
    rows.push_back(std::move(row));
  }
  const double moments = annulus::verify_moments(model, T, budget, c.tol);
  ok = ok && moments <= 1e-10;
  json report{{"version", annulus::io::version}, {"r", c.r},        {"d", budget},
              {"M", model.M},                    {"exact", model.exact}, {"moment_residual", moments},
              {"functions", std::move(rows)}};
  if (!model_dir.empty()) annulus::io::write_model(model_dir, model, c.seed);
  emit(c, report);
  return ok ? kOk : kFailed;
}

int run_laurent(const Common& c, const std::string& function, std::optional<int> M) {
  const auto f = annulus::io::read_rational(function);
  const int order = M ? *M : annulus::order_for_tolerance(f, 1e-10);
  const auto series = annulus::laurent_expand(f, order);
  json report = annulus::io::to_json(series);
  report["version"] = annulus::io::version;
  emit(c, report);
  return kOk;
}

int run_demo(const Common& c) {
  check_radius(c.r);
  const auto d = annulus::demo_example(c.r, c.tol);
  json spectrum = annulus::io::to_json(d.spectrum_T);
  json report{{"version", annulus::io::version},
              {"r", c.r},
              {"matrix", annulus::io::to_json(annulus::gen::example_matrix(c.r))},
              {"norm_T", {{"measured", d.norm_T}, {"expected", 1.0}}},
              {"spectrum_T", {{"measured", spectrum}, {"expected", std::sqrt(c.r)}}},
              {"spectrum_TstarT", {{"measured", d.spectrum_TstarT}, {"expected", {1.0, c.r * c.r}}}},
              {"completely_non_normal", d.completely_non_normal},
              {"williams", annulus::to_string(d.williams)},
              {"reproduced", d.passes()}};
  emit(c, report);
  return d.passes() ? kOk : kFailed;
}

int run_selftest(bool quick) {
  const auto cfg = quick ? annulus::SuiteConfig::quick() : annulus::SuiteConfig::full();
  bool ok = true;
  annulus::run_suite(cfg, [&](const annulus::CriterionResult& res) {
    std::cout << (res.pass ? "PASS" : "FAIL") << " criterion " << res.id << ": " << res.title << " | " << res.detail
              << '\n';
    ok = ok && res.pass;
  });
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator toolkit for the annulus r <= |z| <= 1"};
  app.set_version_flag("--version", std::string(annulus::io::version));
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_r) {
    auto* opt = sub->add_option("--r", common.r, "inner radius in (0, 1)");
    if (needs_r) opt->required();
    sub->add_option("--seed", common.seed, "master seed");
    sub->add_option("--out", common.out, "report path (default: stdout)");
    sub->add_option("--eig-tol", common.tol.eig_tol);
    sub->add_option("--norm-tol", common.tol.norm_tol);
    sub->add_option("--rank-tol", common.tol.rank_tol);
    sub->add_option("--verify-tol", common.tol.verify_tol);
  };

  std::string matrix, matrix2, model_dir, function;
  std::vector<std::string> functions;
  int trials = 2000, d_dilate = 6, M_dilate = 0;
  std::optional<int> d_model, M_laurent;
  bool quick = false;

  auto* certify = app.add_subcommand("certify", "certify an A_r-contraction candidate");
  add_common(certify, true);
  certify->add_option("--matrix", matrix, "matrix JSON")->required();
  certify->add_option("--trials", trials, "stress trials")->check(CLI::PositiveNumber);

  auto* decompose = app.add_subcommand("decompose", "split an A_r-unitary into U1 (+) rU2");
  add_common(decompose, true);
  decompose->add_option("--matrix", matrix, "matrix JSON")->required();

  auto* dilate = app.add_subcommand("dilate", "commuting dilation of (T, rT^-1) or of a given pair");
  add_common(dilate, true);
  dilate->add_option("--matrix", matrix, "matrix JSON")->required();
  dilate->add_option("--matrix2", matrix2, "second commuting contraction (default rT^-1)");
  dilate->add_option("--d", d_dilate, "degree budget")->check(CLI::PositiveNumber);
  dilate->add_option("--M", M_dilate, "block depth (default d + 1)");

  auto* model = app.add_subcommand("model-verify", "build the model and verify f(T) for each function");
  add_common(model, true);
  model->add_option("--matrix", matrix, "matrix JSON")->required();
  model->add_option("--f", functions, "rational function JSON (repeatable)")->required();
  model->add_option("--d", d_model, "degree budget")->check(CLI::PositiveNumber);
  model->add_option("--model-dir", model_dir, "write N.json, F.json, V.json, meta.json here");

  auto* laurent = app.add_subcommand("laurent", "Laurent expansion with certified tail");
  add_common(laurent, false);
  laurent->add_option("--f", function, "rational function JSON")->required();
  laurent->add_option("--M", M_laurent, "truncation order")->check(CLI::PositiveNumber);

  auto* demo = app.add_subcommand("demo-example", "the 2x2 example that is not an A_r-contraction");
  add_common(demo, true);

  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_flag("--quick", quick, "reduced instance counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (!common.tol.valid()) annulus::fail(annulus::Errc::Parse, "tolerances must be positive");
    if (*certify) return run_certify(common, matrix, trials);
    if (*decompose) return run_decompose(common, matrix);
    if (*dilate) return run_dilate(common, matrix, matrix2, d_dilate, M_dilate);
    if (*model) return run_model_verify(common, matrix, functions, d_model, model_dir);
    if (*laurent) return run_laurent(common, function, M_laurent);
    if (*demo) return run_demo(common);
    if (*selftest) return run_selftest(quick);
  } catch (const annulus::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
