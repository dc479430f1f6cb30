// Command-line experiment harness: each subcommand runs one verification
// suite, writes CSV tables plus a JSON run manifest into the output
// directory, and exits 0 when every check passes, 1 when a check fails,
// 2 when the configuration is invalid.

#include "CLI11.hpp"
#include "json.hpp"

#include "fraclab/appendix.hpp"
#include "fraclab/bubbles.hpp"
#include "fraclab/fields.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/report.hpp"
#include "fraclab/specfun.hpp"
#include "fraclab/stability.hpp"
#include "fraclab/weights.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using fraclab::bubbles::Ambient;
using fraclab::bubbles::BubbleFamily;
using fraclab::bubbles::PairKind;
using fraclab::bubbles::Point;
using fraclab::quad::QuadratureSpec;
using fraclab::report::Check;
using fraclab::report::RunReport;
namespace report = fraclab::report;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  Ambient ambient{3, 0.5};
  std::optional<BubbleFamily> family;  // target terms for `project`
  std::optional<BubbleFamily> init;    // starting guess for `project`
  QuadratureSpec spec;
  std::vector<std::uint64_t> seeds{20240817ULL};
  std::string mode = "cluster";            // sweep-q-gamma
  std::vector<double> separations;         // sweep-q-gamma (mode-dependent default)
  std::vector<double> ratios{10.0, 100.0, 1000.0};  // verify-cutoff
  std::vector<int> basis_sizes{4, 6, 8, 10};        // spectral
  std::vector<double> sweep_grid;          // verify-appendix concentration radii

  nlohmann::json resolved;  // the configuration as actually used
};

std::vector<double> logspace(double lo, double hi, int k) {
  std::vector<double> g;
  for (int i = 0; i < k; ++i)
    g.push_back(lo * std::pow(hi / lo, double(i) / (k - 1)));
  return g;
}

Config load_config(const std::string& path) {
  Config cfg;
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  try {
    if (j.contains("ambient")) {
      cfg.ambient.n = j["ambient"].value("n", cfg.ambient.n);
      cfg.ambient.s = j["ambient"].value("s", cfg.ambient.s);
    }
    cfg.ambient.validate();
    if (j.contains("family"))
      cfg.family = fraclab::bubbles::family_from_json(j["family"]);
    if (j.contains("init"))
      cfg.init = fraclab::bubbles::family_from_json(j["init"]);
    if (j.contains("spec")) {
      const auto& js = j["spec"];
      cfg.spec.abs_tol = js.value("abs_tol", cfg.spec.abs_tol);
      cfg.spec.rel_tol = js.value("rel_tol", cfg.spec.rel_tol);
      cfg.spec.max_refinements =
          js.value("max_refinements", cfg.spec.max_refinements);
      cfg.spec.qmc_samples = js.value("qmc_samples", cfg.spec.qmc_samples);
      cfg.spec.qmc_rel_tol = js.value("qmc_rel_tol", cfg.spec.qmc_rel_tol);
      if (!(cfg.spec.abs_tol > 0.0) || !(cfg.spec.rel_tol > 0.0) ||
          cfg.spec.max_refinements < 1 || cfg.spec.qmc_samples < 1 ||
          !(cfg.spec.qmc_rel_tol > 0.0))
        throw ConfigError("quadrature spec values must be positive");
    }
    if (j.contains("seeds")) {
      cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
      if (cfg.seeds.empty()) throw ConfigError("seeds must be non-empty");
    }
    cfg.spec.seed = cfg.seeds.front();
    if (j.contains("mode")) {
      cfg.mode = j["mode"].get<std::string>();
      if (cfg.mode != "cluster" && cfg.mode != "tower")
        throw ConfigError("mode must be \"cluster\" or \"tower\"");
    }
    if (j.contains("separations"))
      cfg.separations = j["separations"].get<std::vector<double>>();
    if (j.contains("ratios"))
      cfg.ratios = j["ratios"].get<std::vector<double>>();
    if (j.contains("basis_sizes"))
      cfg.basis_sizes = j["basis_sizes"].get<std::vector<int>>();
    if (j.contains("sweep_grid"))
      cfg.sweep_grid = j["sweep_grid"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }

  nlohmann::json r;
  r["ambient"] = {{"n", cfg.ambient.n}, {"s", cfg.ambient.s}};
  if (cfg.family) r["family"] = fraclab::bubbles::family_to_json(*cfg.family);
  if (cfg.init) r["init"] = fraclab::bubbles::family_to_json(*cfg.init);
  r["spec"] = {{"abs_tol", cfg.spec.abs_tol},
               {"rel_tol", cfg.spec.rel_tol},
               {"max_refinements", cfg.spec.max_refinements},
               {"qmc_samples", cfg.spec.qmc_samples},
               {"qmc_rel_tol", cfg.spec.qmc_rel_tol}};
  r["seeds"] = cfg.seeds;
  r["mode"] = cfg.mode;
  if (!cfg.separations.empty()) r["separations"] = cfg.separations;
  r["ratios"] = cfg.ratios;
  r["basis_sizes"] = cfg.basis_sizes;
  if (!cfg.sweep_grid.empty()) r["sweep_grid"] = cfg.sweep_grid;
  cfg.resolved = std::move(r);
  return cfg;
}

Check make_check(const std::string& name, bool passed, double value,
                 double bound, const std::string& detail) {
  Check c;
  c.name = name;
  c.passed = passed;
  c.value = value;
  c.bound = bound;
  c.detail = detail;
  return c;
}

std::string cell(double v) { return report::format_cell(v); }

BubbleFamily default_pair(const Ambient& amb, double l1, double l2, double d) {
  BubbleFamily f;
  f.ambient = amb;
  f.bubbles.push_back({Point(amb.n, 0.0), l1});
  Point z2(amb.n, 0.0);
  z2[0] = d;
  f.bubbles.push_back({z2, l2});
  return f;
}

// --- subcommand bodies -----------------------------------------------------

void run_verify_pde(const Config& cfg, const std::string& out, RunReport& rep) {
  std::vector<double> grid{0.0};
  for (double r : logspace(1e-2, 10.0, 49)) grid.push_back(r);
  const double pde =
      fraclab::fraclap::check_bubble_pde(cfg.ambient.n, cfg.ambient.s, grid);
  const double eig = fraclab::fraclap::check_eigen_relation_dilation(
      cfg.ambient.n, cfg.ambient.s, grid);
  rep.checks.push_back(make_check("bubble-pde-residual", pde <= 1e-6, pde,
                                  1e-6, "max relative residual <= 1e-6"));
  rep.checks.push_back(make_check("dilation-eigen-residual", eig <= 1e-6, eig,
                                  1e-6, "max relative residual <= 1e-6"));
  report::write_csv(out + "/pde_residuals.csv",
                    {"n", "s", "check", "max_residual"},
                    {{cell(cfg.ambient.n), cell(cfg.ambient.s), "pde",
                      cell(pde)},
                     {cell(cfg.ambient.n), cell(cfg.ambient.s),
                      "dilation_eigen", cell(eig)}});
}

void run_verify_laplace(const Config& cfg, const std::string& out,
                        RunReport& rep) {
  const Ambient amb = cfg.ambient;
  double min2f1 = 1e300;
  std::vector<std::vector<std::string>> rows;
  for (double r : logspace(1e-3, 1e3, 61)) {
    const double v = fraclab::specfun::hyp2f1(
        {0.5 * amb.n + amb.s, 2.0 * amb.s, 0.5 * amb.n, -r * r});
    min2f1 = std::min(min2f1, v);
    rows.push_back({cell(r), cell(v)});
  }
  report::write_csv(out + "/hyp2f1_scan.csv", {"r", "value"}, rows);
  rep.checks.push_back(make_check("hyp2f1-positive", min2f1 > 0.0, min2f1, 0.0,
                                  "min over the scan > 0"));
  if (amb.n > 4.0 * amb.s) {
    const int zc = fraclab::specfun::hyp2f1_zero_count(amb.n, amb.s);
    rep.checks.push_back(make_check("hyp2f1-zero-count", zc == 0,
                                    static_cast<double>(zc), 0.0,
                                    "predicted zero count == 0"));
  }
  const auto lr = fraclab::weights::verify_laplace_inequality(amb);
  rep.checks.push_back(make_check("alpha-positive", lr.alpha > 0.0, lr.alpha,
                                  0.0, "empirical lower-bound constant > 0"));
  rep.checks.push_back(make_check("companion-positive", lr.companion > 0.0,
                                  lr.companion, 0.0,
                                  "slow-decay companion constant > 0"));
  report::write_csv(out + "/laplace_constants.csv", {"quantity", "value"},
                    {{"alpha", cell(lr.alpha)},
                     {"companion", cell(lr.companion)},
                     {"min_hyp2f1", cell(min2f1)}});
}

void run_verify_appendix(const Config& cfg, const std::string& out,
                         RunReport& rep) {
  namespace appendix = fraclab::appendix;
  const Ambient amb = cfg.ambient;
  const auto grid =
      cfg.sweep_grid.empty() ? logspace(10.0, 1000.0, 5) : cfg.sweep_grid;
  if (grid.size() < 4 || grid.back() < 100.0 * grid.front())
    throw ConfigError("sweep_grid needs >= 4 radii spanning two decades");
  QuadratureSpec spec = cfg.spec;
  spec.rel_tol = std::max(spec.rel_tol, 1e-7);
  spec.abs_tol = std::max(spec.abs_tol, 1e-14);
  const BubbleFamily tmpl =
      cfg.family ? *cfg.family : default_pair(amb, 1.0, 1.0, 10.0);

  const bool threshold = std::abs(amb.n - 6.0 * amb.s) < 1e-9;
  const double slow_rate = -(amb.n + 2.0 * amb.s);

  auto handle = [&](const appendix::LemmaTable& table) {
    appendix::write_table_csv(table, amb,
                              out + "/" + table.lemma + "_rates.csv");
    for (const auto& row : table.rows) {
      if (!row.applicable) continue;
      double worst = 1e300;
      for (const auto& [R, v] : row.fit.samples) worst = std::min(worst, v);
      rep.checks.push_back(make_check(row.id + "-positive", worst > 0.0, worst,
                                      0.0, "all swept values > 0"));
    }
  };

  const auto b1 = appendix::lemma_B1_table(amb, tmpl, grid, spec);
  handle(b1);
  {
    const double expect = threshold ? 4.0 * amb.s - 2.0 * amb.n
                                    : -(amb.n + 4.0 * amb.s);
    const double got = b1.rows[0].fit.fitted_exponent;
    rep.checks.push_back(make_check(
        b1.rows[0].id + "-rate", std::abs(got - expect) <= 0.15, got, expect,
        "fitted exponent within 0.15 of the in-ball-mass rate"));
  }

  const auto b2 = appendix::lemma_B2_table(amb, tmpl, grid, spec);
  handle(b2);
  if (threshold) {
    const auto& fit = b2.rows[0].fit;
    rep.checks.push_back(make_check(b2.rows[0].id + "-log-factor",
                                    fit.log_factor_detected,
                                    fit.log_factor_detected ? 1.0 : 0.0, 1.0,
                                    "log-factor model selected"));
    const double expect = -8.0 * amb.s;
    rep.checks.push_back(make_check(
        b2.rows[0].id + "-rate",
        std::abs(fit.fitted_exponent - expect) <= 0.15, fit.fitted_exponent,
        expect, "threshold-dimension exponent within 0.15"));
  } else {
    for (int k : {0, 1})
      if (b2.rows[k].applicable)
        rep.checks.push_back(make_check(
            b2.rows[k].id + "-rate",
            std::abs(b2.rows[k].fit.fitted_exponent - slow_rate) <= 0.1,
            b2.rows[k].fit.fitted_exponent, slow_rate,
            "two-sided rate within 0.1"));
  }
  for (int k : {3, 4, 5})
    if (static_cast<std::size_t>(k) < b2.rows.size() && b2.rows[k].applicable)
      rep.checks.push_back(make_check(
          b2.rows[k].id + "-rate",
          b2.rows[k].fit.fitted_exponent <= slow_rate + 0.1,
          b2.rows[k].fit.fitted_exponent, slow_rate + 0.1,
          "one-sided rate at least as fast as the stated one"));

  const auto b4 = appendix::lemma_B4_table(amb, tmpl, grid, spec);
  handle(b4);
  if (b4.rows[0].applicable)
    rep.checks.push_back(make_check(
        b4.rows[0].id + "-rate",
        std::abs(b4.rows[0].fit.fitted_exponent - (2.0 * amb.s - amb.n)) <=
            0.1,
        b4.rows[0].fit.fitted_exponent, 2.0 * amb.s - amb.n,
        "two-sided rate within 0.1"));
  if (b4.rows[1].applicable)
    rep.checks.push_back(make_check(
        b4.rows[1].id + "-rate",
        std::abs(b4.rows[1].fit.fitted_exponent + amb.n) <= 0.1,
        b4.rows[1].fit.fitted_exponent, -double(amb.n),
        "two-sided rate within 0.1"));

  if (threshold) {
    const BubbleFamily tower = default_pair(amb, 100.0, 1.0, 0.0);
    const auto b3 = appendix::lemma_B3_check(amb, tower, grid, spec);
    std::vector<std::vector<std::string>> rows;
    std::vector<double> normalized;
    for (const auto& [R, v] : b3.samples) {
      rows.push_back({cell(R), cell(v)});
      normalized.push_back(v * std::pow(R, 8.0 * amb.s) / std::log(R));
    }
    report::write_csv(out + "/tower_threshold_rates.csv", {"R", "value"},
                      rows);
    const double lo =
        *std::min_element(normalized.begin(), normalized.end());
    const double hi =
        *std::max_element(normalized.begin(), normalized.end());
    rep.checks.push_back(make_check(
        "tower-threshold-constant", hi <= 3.0 * lo, hi / lo, 3.0,
        "normalized values drift by at most a factor 3"));
  }
}

void run_verify_cutoff(const Config& cfg, const std::string& out,
                       RunReport& rep) {
  if (cfg.ratios.size() < 2)
    throw ConfigError("verify-cutoff needs >= 2 ratios");
  auto ratios = cfg.ratios;
  std::sort(ratios.begin(), ratios.end());
  const auto fit = fraclab::stability::verify_cutoff_gradient_bound(
      cfg.ambient, ratios, cfg.spec);
  std::vector<std::vector<std::string>> rows;
  double prev = 1e300;
  bool decreasing = true, positive = true;
  for (const auto& [ratio, v] : fit.samples) {
    rows.push_back({cell(ratio), cell(v)});
    positive = positive && v > 0.0;
    decreasing = decreasing && v < prev;
    prev = v;
  }
  report::write_csv(out + "/cutoff_gradient.csv", {"ratio", "value"}, rows);
  rep.checks.push_back(make_check("values-positive-decreasing",
                                  positive && decreasing,
                                  decreasing ? 1.0 : 0.0, 1.0,
                                  "positive and decreasing in the ratio"));
  const double bound = 1.0 - cfg.ambient.n / cfg.ambient.s + 0.3;
  rep.checks.push_back(make_check(
      "one-sided-exponent", fit.fitted_exponent <= bound, fit.fitted_exponent,
      bound, "certified one-sided log exponent below the bound"));
}

void run_spectral(const Config& cfg, const std::string& out, RunReport& rep) {
  if (cfg.basis_sizes.empty())
    throw ConfigError("spectral needs at least one basis size");
  auto sizes = cfg.basis_sizes;
  std::sort(sizes.begin(), sizes.end());
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<double>> evs;
  for (int k : sizes) {
    evs.push_back(
        fraclab::stability::spectral_gap_radial(cfg.ambient, k, cfg.spec));
    for (std::size_t i = 0; i < evs.back().size(); ++i)
      rows.push_back({cell(k), cell(static_cast<double>(i)),
                      cell(evs.back()[i])});
  }
  report::write_csv(out + "/spectrum.csv",
                    {"basis_size", "index", "eigenvalue"}, rows);
  const auto& top = evs.back();
  const double p = cfg.ambient.p();
  rep.checks.push_back(make_check(
      "first-eigenvalue", std::abs(top[0] - 1.0) <= 1e-3, top[0], 1.0,
      "lowest radial eigenvalue is 1 within 1e-3"));
  rep.checks.push_back(make_check(
      "second-eigenvalue", std::abs(top[1] - p) <= 1e-3 * p, top[1], p,
      "dilation eigenvalue is p within 1e-3 relative"));
  rep.checks.push_back(make_check("spectral-gap", top[2] >= 1.1 * p, top[2],
                                  1.1 * p,
                                  "third radial eigenvalue exceeds p by 10%"));
  bool monotone = true;
  for (std::size_t k = 1; k < evs.size(); ++k)
    for (std::size_t i = 0; i < evs[k - 1].size() && i < evs[k].size(); ++i)
      monotone = monotone && evs[k][i] <= evs[k - 1][i] + 1e-9;
  rep.checks.push_back(make_check("variational-monotonicity", monotone,
                                  monotone ? 1.0 : 0.0, 1.0,
                                  "estimates non-increasing in basis size"));
}

void run_project(const Config& cfg, const std::string& out, RunReport& rep) {
  if (!cfg.family)
    throw ConfigError("project needs a \"family\" entry in the config");
  const BubbleFamily target = *cfg.family;
  if (target.ambient.n != cfg.ambient.n || target.ambient.s != cfg.ambient.s)
    throw ConfigError("family ambient disagrees with the config ambient");
  const BubbleFamily init = cfg.init ? *cfg.init : target;
  const auto u = fraclab::fields::from_family(target);
  const auto res = fraclab::stability::project_to_manifold(
      u, static_cast<int>(init.bubbles.size()), init, true, cfg.spec);

  std::vector<std::string> header{"bubble", "alpha", "lambda"};
  for (int k = 1; k <= cfg.ambient.n; ++k)
    header.push_back("z" + std::to_string(k));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < res.bubbles.bubbles.size(); ++i) {
    std::vector<std::string> row{cell(static_cast<double>(i)),
                                 cell(res.bubbles.alpha(i)),
                                 cell(res.bubbles.bubbles[i].lambda)};
    for (double z : res.bubbles.bubbles[i].z) row.push_back(cell(z));
    rows.push_back(std::move(row));
  }
  report::write_csv(out + "/projection.csv", header, rows);

  const double uu = fraclab::fields::hs_inner(u, u, cfg.spec);
  const double scale = std::max(1.0, std::sqrt(std::max(uu, 0.0)));
  rep.checks.push_back(make_check("converged", res.converged,
                                  res.converged ? 1.0 : 0.0, 1.0,
                                  "optimizer reached the tolerance"));
  double worst = 0.0;
  for (double r : res.ortho_residuals) worst = std::max(worst, r);
  rep.checks.push_back(make_check(
      "orthogonality", worst <= 1e-6 * scale, worst, 1e-6 * scale,
      "residual orthogonal to the manifold directions"));
  report::write_csv(
      out + "/projection_summary.csv",
      {"residual_norm", "iterations", "worst_orthogonality"},
      {{cell(res.residual_norm), cell(static_cast<double>(res.iterations)),
        cell(worst)}});
}

void run_sweep(const Config& cfg, const std::string& out, RunReport& rep) {
  const PairKind mode =
      cfg.mode == "tower" ? PairKind::Tower : PairKind::Cluster;
  std::vector<double> seps = cfg.separations;
  if (seps.empty()) {
    const bool threshold = std::abs(cfg.ambient.n - 6.0 * cfg.ambient.s) < 1e-9;
    if (threshold)
      seps = {1e3, 3e3};
    else
      seps = mode == PairKind::Tower ? std::vector<double>{30.0, 100.0, 300.0}
                                     : std::vector<double>{25.0, 60.0, 150.0};
  }
  const auto reports =
      fraclab::stability::q_gamma_sweep(cfg.ambient, mode, seps, cfg.spec);
  std::vector<std::vector<std::string>> rows;
  std::vector<double> ratios;
  bool direction = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const char* regime = r.regime == fraclab::stability::Regime::Linear
                             ? "linear"
                             : (r.regime == fraclab::stability::Regime::Log
                                    ? "log"
                                    : "power");
    rows.push_back({cell(seps[i]), cell(r.q), cell(r.gamma), regime,
                    cell(r.rhs), cell(r.q / r.gamma)});
    ratios.push_back(r.q / r.gamma);
    direction = direction && r.q <= r.rhs * (1.0 + 1e-9);
  }
  report::write_csv(out + "/q_gamma.csv",
                    {"separation", "q", "gamma", "regime", "rhs",
                     "q_over_gamma"},
                    rows);
  rep.checks.push_back(make_check("inequality-direction", direction,
                                  direction ? 1.0 : 0.0, 1.0,
                                  "Q below the fitted regime right side"));
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  rep.checks.push_back(make_check("ratio-stability", hi <= 3.0 * lo, hi / lo,
                                  3.0,
                                  "max(Q/Gamma) / min(Q/Gamma) <= 3"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification lab for bubble decompositions"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  app.add_option("--config", config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory for CSV tables and the "
                                   "run manifest");

  using Runner = void (*)(const Config&, const std::string&, RunReport&);
  const std::vector<std::pair<std::string, Runner>> commands{
      {"verify-pde", &run_verify_pde},
      {"verify-laplace", &run_verify_laplace},
      {"verify-appendix", &run_verify_appendix},
      {"verify-cutoff", &run_verify_cutoff},
      {"spectral", &run_spectral},
      {"project", &run_project},
      {"sweep-q-gamma", &run_sweep}};
  for (const auto& [name, fn] : commands)
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunReport rep;
  try {
    Config cfg = load_config(config_path);
    const auto* sub = app.get_subcommands().front();
    rep.command = sub->get_name();
    rep.config = cfg.resolved;
    rep.seeds = cfg.seeds;
    std::filesystem::create_directories(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& [name, fn] : commands)
      if (name == rep.command) fn(cfg, out_dir, rep);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << rep.command << " failed: " << e.what() << "\n";
    Check c;
    c.name = "run-completed";
    c.passed = false;
    c.detail = e.what();
    rep.checks.push_back(c);
    try {
      std::filesystem::create_directories(out_dir);
      report::write_manifest(rep, out_dir + "/manifest.json");
    } catch (const std::exception&) {
      // the manifest is best-effort once the run itself has failed
    }
    return 1;
  }

  report::write_manifest(rep, out_dir + "/manifest.json");
  for (const Check& c : rep.checks)
    std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  value="
              << c.value << "  bound=" << c.bound << "\n";
  std::cout << (rep.all_passed() ? "all checks passed" : "checks failed")
            << "  (" << rep.wall_seconds << " s)\n";
  return rep.all_passed() ? 0 : 1;
}
