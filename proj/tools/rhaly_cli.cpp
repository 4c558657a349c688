// Command-line driver: batch experiments plus one-shot access to the numerics.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhaly/criteria.hpp"
#include "rhaly/error.hpp"
#include "rhaly/etagen.hpp"
#include "rhaly/experiment.hpp"
#include "rhaly/format.hpp"
#include "rhaly/normest.hpp"
#include "rhaly/testfuncs.hpp"

namespace ex = rhaly::experiment;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw rhaly::InvalidArgument("cannot read " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw rhaly::InvalidArgument(path + ": " + e.what());
  }
}

struct EtaFlags {
  std::string kind = "classical";
  double s = 1.0;
  double r = 0.0;
  std::string measure_file;
  std::string values_file;
  std::optional<std::size_t> n_max;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--eta", kind, "eta source")
        ->check(CLI::IsMember({"classical", "power_log", "measure", "explicit"}));
    cmd->add_option("--s", s, "power_log exponent s");
    cmd->add_option("--r", r, "power_log log exponent r");
    cmd->add_option("--measure", measure_file, "measure JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--eta-file", values_file, "JSON array of eta values")
        ->check(CLI::ExistingFile);
    cmd->add_option("--n-max", n_max, "largest stored eta index");
  }

  json source() const {
    if (kind == "power_log") {
      return {{"type", kind}, {"s", s}, {"r", r}};
    }
    if (kind == "measure") {
      if (measure_file.empty()) {
        throw rhaly::InvalidArgument("--eta measure needs --measure FILE");
      }
      return {{"type", kind}, {"measure", read_json(measure_file)}};
    }
    if (kind == "explicit") {
      if (values_file.empty()) {
        throw rhaly::InvalidArgument("--eta explicit needs --eta-file FILE");
      }
      return {{"type", kind}, {"values", read_json(values_file)}};
    }
    return {{"type", kind}};
  }

  rhaly::EtaSeq build(std::size_t fallback_max_index) const {
    json doc{{"eta_source", source()}, {"alpha", 0.0}, {"beta", 0.0},
             {"tasks", json::array({"criterion"})}};
    if (n_max) {
      doc["n_max"] = *n_max;
    }
    ex::ExperimentConfig config = ex::config_from_json(doc);
    if (!config.n_max) {
      config.n_max = fallback_max_index;
    }
    return config.make_eta();
  }
};

struct PowerFlags {
  double tol = 1e-10;
  int max_iter = 100000;
  std::uint64_t seed = 42;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--tol", tol, "relative eigen-residual tolerance");
    cmd->add_option("--max-iter", max_iter, "power iteration cap");
    cmd->add_option("--seed", seed, "start-vector seed")->capture_default_str();
  }
  rhaly::PowerIterationOptions options() const { return {tol, max_iter, seed}; }
};

void print(const json& doc) { std::cout << doc.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for generalized Cesaro operators on weighted Dirichlet spaces"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  std::string config_file;
  EtaFlags run_eta;
  std::optional<double> run_alpha;
  std::optional<double> run_beta;
  std::optional<int> run_grid_min;
  std::optional<int> run_grid_max;
  std::vector<std::string> run_tasks;
  std::optional<std::uint64_t> run_seed;
  std::string run_out;
  run_cmd->add_option("--config", config_file, "experiment JSON")->check(CLI::ExistingFile);
  run_eta.add_to(run_cmd);
  run_cmd->add_option("--alpha", run_alpha);
  run_cmd->add_option("--beta", run_beta);
  run_cmd->add_option("--grid-min", run_grid_min, "smallest exponent of N = 2^k");
  run_cmd->add_option("--grid-max", run_grid_max, "largest exponent of N = 2^k");
  run_cmd->add_option("--tasks", run_tasks, "tasks to run")->delimiter(',');
  run_cmd->add_option("--seed", run_seed, "power iteration seed (default 42)");
  run_cmd->add_option("--out", run_out, "output directory");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a list of configs and merge summaries");
  std::string sweep_file;
  std::string sweep_out;
  int jobs = 1;
  sweep_cmd->add_option("--configs", sweep_file, "JSON array, or {base, alpha, beta}")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "output directory");
  sweep_cmd->add_option("--jobs", jobs, "concurrent configs")->check(CLI::PositiveNumber);

  // moments
  auto* moments_cmd = app.add_subcommand("moments", "dump eta_n from a measure as CSV");
  std::string moments_measure;
  std::size_t moments_n = 64;
  std::string moments_out;
  moments_cmd->add_option("--measure", moments_measure, "measure JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  moments_cmd->add_option("--n-max", moments_n, "largest index")->capture_default_str();
  moments_cmd->add_option("--out", moments_out, "CSV file (default stdout)");

  // section-norm
  auto* norm_cmd = app.add_subcommand("section-norm", "largest singular value of a section");
  EtaFlags norm_eta;
  PowerFlags norm_power;
  double norm_alpha = 0.0;
  double norm_beta = 0.0;
  std::size_t norm_n = 256;
  std::optional<std::size_t> norm_cut;
  norm_eta.add_to(norm_cmd);
  norm_power.add_to(norm_cmd);
  norm_cmd->add_option("--alpha", norm_alpha)->required();
  norm_cmd->add_option("--beta", norm_beta)->required();
  norm_cmd->add_option("--n", norm_n, "section order")->capture_default_str();
  norm_cmd->add_option("--n-cut", norm_cut, "report the residual C - C_{n-cut} instead");

  // criterion
  auto* crit_cmd = app.add_subcommand("criterion", "evaluate a boundedness criterion");
  EtaFlags crit_eta;
  double crit_alpha = 0.0;
  double crit_beta = 0.0;
  rhaly::DyadicGrid crit_grid;
  std::string crit_form = "tail";
  std::string crit_csv;
  crit_eta.add_to(crit_cmd);
  crit_cmd->add_option("--alpha", crit_alpha)->required();
  crit_cmd->add_option("--beta", crit_beta)->required();
  crit_cmd->add_option("--grid-min", crit_grid.min_exp)->capture_default_str();
  crit_cmd->add_option("--grid-max", crit_grid.max_exp)->capture_default_str();
  crit_cmd->add_option("--form", crit_form)
      ->check(CLI::IsMember({"tail", "partial_sum", "shortcut"}));
  crit_cmd->add_option("--csv", crit_csv, "also write the grid as CSV");

  // certify
  auto* cert_cmd = app.add_subcommand("certify", "produce a certificate");
  std::string cert_kind = "lower_bound";
  EtaFlags cert_eta;
  PowerFlags cert_power;
  double cert_alpha = 0.0;
  double cert_beta = 0.0;
  std::string test_function = "one";
  double cert_b = 0.9;
  std::size_t cert_n = 0;
  std::string kernel = "log";
  double coeff_decay = 1.0;
  rhaly::DyadicGrid cert_grid;
  cert_cmd->add_option("--kind", cert_kind)
      ->check(CLI::IsMember({"lower_bound", "schur", "bennett"}));
  cert_eta.add_to(cert_cmd);
  cert_power.add_to(cert_cmd);
  cert_cmd->add_option("--alpha", cert_alpha);
  cert_cmd->add_option("--beta", cert_beta);
  cert_cmd->add_option("--test-function", test_function)
      ->check(CLI::IsMember({"one", "monomial", "h_b", "g_b"}));
  cert_cmd->add_option("--b", cert_b, "test-function parameter");
  cert_cmd->add_option("--n", cert_n, "truncation / monomial degree / kernel size");
  cert_cmd->add_option("--kernel", kernel)->check(CLI::IsMember({"log", "hilbert"}));
  cert_cmd->add_option("--coeff-decay", coeff_decay, "bennett: |a_k| = k^-p");
  cert_cmd->add_option("--grid-min", cert_grid.min_exp);
  cert_cmd->add_option("--grid-max", cert_grid.max_exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kExitValidation;
  }

  try {
    if (run_cmd->parsed()) {
      json doc = config_file.empty() ? json::object() : read_json(config_file);
      if (!run_cmd->get_option("--eta")->empty() || !doc.contains("eta_source")) {
        doc["eta_source"] = run_eta.source();
      }
      if (run_eta.n_max) {
        doc["n_max"] = *run_eta.n_max;
      }
      if (run_alpha) doc["alpha"] = *run_alpha;
      if (run_beta) doc["beta"] = *run_beta;
      if (run_grid_min) doc["n_grid"]["min_exp"] = *run_grid_min;
      if (run_grid_max) doc["n_grid"]["max_exp"] = *run_grid_max;
      if (!run_tasks.empty()) doc["tasks"] = run_tasks;
      if (run_seed) doc["seed"] = *run_seed;
      if (!run_out.empty()) doc["output"]["dir"] = run_out;
      const ex::RunResult result = ex::run(ex::config_from_json(doc));
      print(result.summary);
      if (result.exit_code != ex::kExitOk) {
        std::cerr << "error: " << result.error << '\n';
      }
      return result.exit_code;
    }

    if (sweep_cmd->parsed()) {
      const ex::SweepResult result =
          ex::sweep(ex::sweep_configs_from_json(read_json(sweep_file)), sweep_out, jobs);
      std::cout << result.table_csv;
      if (result.exit_code != ex::kExitOk) {
        std::cerr << "error: " << result.error << '\n';
      }
      return result.exit_code;
    }

    if (moments_cmd->parsed()) {
      const rhaly::EtaSeq eta =
          rhaly::measure_moments(rhaly::measure_from_json(read_json(moments_measure)), moments_n);
      std::ostringstream csv;
      csv << "n,eta\n";
      for (std::size_t n = 0; n < eta.size(); ++n) {
        csv << n << ',' << rhaly::format_double(eta[n].real()) << '\n';
      }
      if (moments_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream(moments_out, std::ios::binary) << csv.str();
      }
      return ex::kExitOk;
    }

    if (norm_cmd->parsed()) {
      const rhaly::EtaSeq eta = norm_eta.build(norm_n + 1);
      rhaly::NormEstimate est;
      if (norm_cut) {
        est = rhaly::residual_norm(eta, norm_alpha, norm_beta, *norm_cut, norm_n,
                                   norm_power.options());
      } else {
        est = rhaly::section_norm(rhaly::section(eta, norm_alpha, norm_beta, norm_n),
                                  norm_power.options());
      }
      print({{"value", rhaly::json_real(est.value)},
             {"iterations", est.iterations},
             {"residual", rhaly::json_real(est.residual)},
             {"converged", est.converged}});
      return est.converged ? ex::kExitOk : ex::kExitNumerical;
    }

    if (crit_cmd->parsed()) {
      const std::size_t top = std::size_t{1} << crit_grid.max_exp;
      const rhaly::EtaSeq eta = crit_eta.build(std::max(ex::kDefaultMaxIndex, 16 * top));
      rhaly::CriterionReport report;
      if (crit_form == "partial_sum") {
        report = rhaly::partial_sum_form(eta, crit_alpha, crit_beta, crit_grid);
      } else if (crit_form == "shortcut") {
        report = rhaly::decreasing_shortcut(eta, crit_alpha, crit_beta, crit_grid);
      } else {
        report = rhaly::criterion(eta, crit_alpha, crit_beta, crit_grid);
      }
      if (!crit_csv.empty()) {
        std::ofstream(crit_csv, std::ios::binary) << rhaly::to_csv(report);
      }
      print(rhaly::to_json(report));
      return ex::kExitOk;
    }

    if (cert_cmd->parsed()) {
      rhaly::Certificate cert;
      if (cert_kind == "schur") {
        const std::size_t n = cert_n == 0 ? 4096 : cert_n;
        if (kernel == "log") {
          cert = rhaly::schur_certify(rhaly::log_kernel, rhaly::log_kernel_weights(n), n);
        } else {
          std::vector<double> p(n);
          for (std::size_t j = 1; j <= n; ++j) {
            p[j - 1] = 1.0 / std::sqrt(static_cast<double>(j));
          }
          cert = rhaly::schur_certify(rhaly::hilbert_kernel, p, n);
        }
      } else if (cert_kind == "bennett") {
        const std::size_t top = std::size_t{1} << cert_grid.max_exp;
        const rhaly::EtaSeq eta = cert_eta.build(top);
        std::vector<double> abs_a(top);
        for (std::size_t k = 1; k <= top; ++k) {
          abs_a[k - 1] = std::pow(static_cast<double>(k), -coeff_decay);
        }
        cert = rhaly::bennett_uvw(eta, cert_alpha, cert_beta, abs_a, cert_grid);
      } else {
        std::size_t n = cert_n;
        if (n == 0) {
          n = (test_function == "h_b" || test_function == "g_b")
                  ? rhaly::default_truncation(cert_b)
                  : 256;
        }
        const rhaly::EtaSeq eta = cert_eta.build(n);
        std::optional<rhaly::CoeffSeq> f;
        if (test_function == "one") {
          f = rhaly::monomial(0);
        } else if (test_function == "monomial") {
          f = rhaly::monomial(n);
        } else if (test_function == "h_b") {
          f = rhaly::h_b(cert_b, n);
        } else {
          f = rhaly::g_b_alpha(cert_b, cert_alpha, n);
        }
        rhaly::LowerBoundOptions options;
        options.power = cert_power.options();
        cert = rhaly::lower_bound(eta.truncated(std::min(eta.size(), n + 1)), cert_alpha,
                                  cert_beta, *f, options);
      }
      print(rhaly::to_json(cert));
      return ex::kExitOk;
    }
  } catch (const rhaly::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kExitValidation;
  } catch (const rhaly::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return ex::kExitNumerical;
  }
  return ex::kExitOk;
}
