// kslog command-line tool: run, sweep, family, check, convergence.
//
// Exit codes: 0 success (a BlowUp verdict is a success), 1 usage or
// configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "kslog/blowup_lab.hpp"
#include "kslog/config.hpp"
#include "kslog/energy.hpp"
#include "kslog/errors.hpp"
#include "kslog/harness.hpp"
#include "kslog/output.hpp"

using namespace kslog;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

ExperimentConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::string list_text(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_number(xs[i]);
  return out;
}

void print_report(const char* name, const ConditionReport& r) {
  std::cout << name << ": " << (r.holds ? "holds" : "violated") << '\n';
  std::cout << "  max_violation = " << format_number(r.max_violation) << '\n';
  std::cout << "  tolerance = " << format_number(r.tolerance) << '\n';
  if (r.witness) std::cout << "  witness s = " << format_number(*r.witness) << '\n';
  if (!r.detail.empty()) std::cout << "  " << r.detail << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kslog: chemotaxis simulator with logarithmic diffusion"};
  app.set_version_flag("--version", artifact_version());
  app.require_subcommand(1);

  // run
  std::string run_config, run_out;
  std::vector<std::string> run_sets;
  auto* run_cmd = app.add_subcommand("run", "run one configuration");
  run_cmd->add_option("--config", run_config, "config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_out, "output directory")->required();
  run_cmd->add_option("--set", run_sets, "override a config key (key=value)");

  // sweep
  std::string sweep_spec, sweep_out;
  int sweep_parallel = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep with classification");
  sweep_cmd->add_option("--spec", sweep_spec, "sweep config file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "output directory (default: sweep_out)");
  sweep_cmd->add_option("--max-parallel", sweep_parallel, "override sweep.max_parallel")
      ->check(CLI::PositiveNumber);

  // family
  std::string fam_config, fam_out;
  std::vector<double> fam_etas{0.2, 0.1, 0.05, 0.025};
  std::vector<std::string> fam_sets;
  double fam_below = 0.0;
  auto* fam_cmd = app.add_subcommand("family", "energy of the concentrating initial-data family");
  fam_cmd->add_option("--config", fam_config, "config file (radial domain)")->check(CLI::ExistingFile);
  fam_cmd->add_option("--set", fam_sets, "override a config key (key=value)");
  fam_cmd->add_option("--eta", fam_etas, "decreasing eta values (fractions of R)")->delimiter(',');
  fam_cmd->add_option("--below", fam_below, "also search the first eta with F < -C");
  fam_cmd->add_option("--out", fam_out, "write family.csv into this directory");

  // check
  bool chk_growth = false, chk_damping = false, chk_eps = false;
  int chk_n = 2, chk_samples = 200;
  double chk_k = 1.0, chk_theta = 0.5, chk_alpha_prime = 1.0, chk_eps_c = 0.1, chk_K = 1.0;
  double chk_s_max = 1e4;
  std::string chk_config, chk_ratio = "model";
  ModelParams chk_params;
  auto* chk_cmd = app.add_subcommand("check", "structural condition checks");
  auto* g_growth = chk_cmd->add_flag("--growth", chk_growth, "G(s) <= k s (ln s)^theta or k s^(2 - alpha')");
  auto* g_damp = chk_cmd->add_flag("--damping", chk_damping, "kappa < beta + 2/n");
  auto* g_eps = chk_cmd->add_flag("--eps-condition", chk_eps, "H(s) <= (n - 2 - eps_c)/n G(s) + K s");
  g_growth->excludes(g_damp)->excludes(g_eps);
  g_damp->excludes(g_eps);
  chk_cmd->add_option("--config", chk_config, "take model parameters from a config file")
      ->check(CLI::ExistingFile);
  chk_cmd->add_option("--n", chk_n, "space dimension")->check(CLI::PositiveNumber);
  chk_cmd->add_option("--k", chk_k, "growth constant");
  chk_cmd->add_option("--theta", chk_theta, "n = 2 growth exponent");
  chk_cmd->add_option("--alpha-prime", chk_alpha_prime, "n >= 3 growth exponent");
  chk_cmd->add_option("--eps-c", chk_eps_c, "eps in the H condition");
  chk_cmd->add_option("--K", chk_K, "linear constant in the H condition");
  chk_cmd->add_option("--samples", chk_samples, "geometric samples")->check(CLI::PositiveNumber);
  chk_cmd->add_option("--s-max", chk_s_max, "upper end of the sampled range");
  chk_cmd->add_option("--alpha", chk_params.alpha);
  chk_cmd->add_option("--beta", chk_params.beta);
  chk_cmd->add_option("--kappa", chk_params.kappa);
  chk_cmd->add_option("--eps", chk_params.eps);
  chk_cmd->add_option("--s0", chk_params.s0);
  chk_cmd->add_option("--psi-c", chk_params.psi_c);
  chk_cmd->add_option("--ratio", chk_ratio, "model or unit")->check(CLI::IsMember({"model", "unit"}));

  // convergence
  std::string conv_config, conv_out;
  std::vector<std::string> conv_sets;
  std::vector<double> conv_eps{0.1, 0.05, 0.025, 0.0125};
  double conv_t_probe = 0.05, conv_delta = 1e-6;
  bool conv_dependence = false;
  auto* conv_cmd = app.add_subcommand("convergence", "eps-convergence scan or continuous dependence");
  conv_cmd->add_option("--config", conv_config, "config file")->required()->check(CLI::ExistingFile);
  conv_cmd->add_option("--set", conv_sets, "override a config key (key=value)");
  conv_cmd->add_option("--eps", conv_eps, "decreasing eps values")->delimiter(',');
  conv_cmd->add_option("--t-probe", conv_t_probe, "probe time");
  conv_cmd->add_flag("--dependence", conv_dependence, "perturb u0 instead of scanning eps");
  conv_cmd->add_option("--delta", conv_delta, "perturbation size for --dependence");
  conv_cmd->add_option("--out", conv_out, "write a CSV into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) {
      const ExperimentConfig cfg = load_with_overrides(run_config, run_sets);
      const RunArtifacts a = run_experiment(cfg, run_out);
      const TerminationReason& tr = a.result.termination;
      std::cout << "termination: " << to_string(tr.tag) << " at t = " << format_number(tr.t_final)
                << " after " << a.result.steps << " steps\n";
      std::cout << "classification: " << to_string(a.classification) << '\n';
      if (!tr.detail.empty()) std::cout << "detail: " << tr.detail << '\n';
      std::cout << "outputs: " << run_out << '\n';
      return tr.tag == Termination::NumericalFailure ? kNumerical : kOk;
    }

    if (*sweep_cmd) {
      ExperimentConfig cfg = load_config(sweep_spec);
      if (sweep_parallel > 0) cfg.max_parallel = sweep_parallel;
      const std::string out = sweep_out.empty() ? "sweep_out" : sweep_out;
      const auto entries = run_sweep(cfg, out);
      std::cout << sweep_index_csv(cfg, entries);
      bool config_error = false, failure = false;
      for (const auto& e : entries) {
        config_error = config_error || !e.error.empty();
        failure = failure || (e.error.empty() && e.termination == Termination::NumericalFailure);
      }
      if (config_error) return kUsage;
      return failure ? kNumerical : kOk;
    }

    if (*fam_cmd) {
      ExperimentConfig cfg = load_with_overrides(fam_config, fam_sets);
      if (fam_config.empty()) {
        cfg.domain.kind = DomainKind::RadialBall;
        cfg.domain.n = 2;
        cfg.domain.R = 1.0;
        cfg.domain.cells = 512;
      }
      if (cfg.domain.kind != DomainKind::RadialBall)
        throw ConfigError("family: needs domain.kind = radial");
      const Grid g(cfg.domain);
      const double R = cfg.domain.R;
      std::vector<double> etas;
      for (double e : fam_etas) etas.push_back(e * R);
      const FunctionalTable table =
          build_table(cfg.params, make_overrides(cfg.overrides).ratio, cfg.table_s_min, 100.0);
      const FamilyScan scan = family_scan(cfg.family, etas, g, table);
      std::string csv = "eta,F\n";
      std::cout << "eta, F\n";
      for (std::size_t k = 0; k < scan.eta.size(); ++k) {
        csv += format_number(scan.eta[k]) + "," + format_number(scan.F[k]) + "\n";
        std::cout << format_number(scan.eta[k]) << ", " << format_number(scan.F[k]) << '\n';
      }
      if (scan.strictly_decreasing)
        std::cout << "strictly decreasing: " << (*scan.strictly_decreasing ? "yes" : "no") << '\n';
      if (scan.eta.size() >= 3)
        std::cout << "fitted exponent: " << format_number(fitted_divergence_exponent(scan, R)) << '\n';
      if (fam_below > 0.0) {
        const InitialData d = find_initial_below(fam_below, cfg.family, g, table);
        std::cout << "first eta with F < -" << format_number(fam_below) << ": "
                  << format_number(d.eta) << " (F = " << format_number(d.F) << ")\n";
      }
      if (!fam_out.empty()) {
        std::filesystem::create_directories(fam_out);
        write_text((std::filesystem::path(fam_out) / "family.csv").string(), csv);
      }
      return kOk;
    }

    if (*chk_cmd) {
      if (!chk_growth && !chk_damping && !chk_eps) {
        std::cerr << "check: pass one of --growth, --damping, --eps-condition\n"
                  << chk_cmd->help();
        return kUsage;
      }
      ModelParams p = chk_params;
      if (!chk_config.empty()) p = load_config(chk_config).params;
      p.validate();
      if (chk_damping) {
        const bool permissive = check_damping_threshold(p, chk_n);
        std::cout << "damping threshold kappa < beta + 2/n: " << (permissive ? "yes" : "no")
                  << " (kappa = " << format_number(p.kappa)
                  << ", beta + 2/n = " << format_number(p.beta + 2.0 / chk_n) << ")\n";
        return kOk;
      }
      const RatioOverride ratio = chk_ratio == "unit" ? RatioOverride::unit() : RatioOverride::model();
      const double s_max = std::max(chk_s_max, 2.0 * p.s0);
      const FunctionalTable table = build_table(p, ratio, std::min(1e-8, 0.5 * p.s0), s_max);
      if (chk_growth) {
        print_report("growth condition",
                     check_growth_condition(table, chk_n, chk_k,
                                            chk_n == 2 ? chk_theta : chk_alpha_prime, chk_samples));
      } else {
        print_report("eps condition",
                     check_eps_condition(table, chk_n, chk_eps_c, chk_K, chk_samples));
      }
      return kOk;
    }

    if (*conv_cmd) {
      ExperimentConfig cfg = load_with_overrides(conv_config, conv_sets);
      const RunConfig rc = build_run_config(cfg);
      std::string csv;
      if (conv_dependence) {
        const DependenceRecord rec = continuous_dependence(rc, conv_delta, conv_t_probe);
        double sup = 0.0;
        for (double s : rec.separation) sup = std::max(sup, s);
        std::cout << "completed: " << (rec.completed ? "yes" : "no") << " ("
                  << to_string(rec.termination) << ")\n";
        std::cout << "sup separation: " << format_number(sup) << '\n';
        std::cout << "fitted rate C: " << format_number(rec.rate) << '\n';
        std::cout << "prefactor K: " << format_number(rec.prefactor) << '\n';
        csv = "t,separation\n";
        for (std::size_t k = 0; k < rec.t.size(); ++k)
          csv += format_number(rec.t[k]) + "," + format_number(rec.separation[k]) + "\n";
        if (!conv_out.empty()) {
          std::filesystem::create_directories(conv_out);
          write_text((std::filesystem::path(conv_out) / "dependence.csv").string(), csv);
        }
        return rec.termination == Termination::NumericalFailure ? kNumerical : kOk;
      }
      const EpsilonScan scan = epsilon_convergence_scan(rc, conv_eps, conv_t_probe);
      std::cout << "eps: " << list_text(scan.eps) << '\n';
      std::cout << "gaps: " << list_text(scan.gaps) << '\n';
      std::cout << "strictly decreasing: " << (scan.strictly_decreasing ? "yes" : "no") << '\n';
      if (scan.aborted_eps) std::cout << "aborted at eps = " << format_number(*scan.aborted_eps) << '\n';
      csv = "eps_k,eps_k1,gap\n";
      for (std::size_t k = 0; k < scan.gaps.size(); ++k)
        csv += format_number(scan.eps[k]) + "," + format_number(scan.eps[k + 1]) + "," +
               format_number(scan.gaps[k]) + "\n";
      if (!conv_out.empty()) {
        std::filesystem::create_directories(conv_out);
        write_text((std::filesystem::path(conv_out) / "eps_scan.csv").string(), csv);
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
