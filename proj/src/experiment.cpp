#include "rhaly/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "rhaly/error.hpp"
#include "rhaly/format.hpp"
#include "rhaly/normest.hpp"
#include "rhaly/testfuncs.hpp"

namespace rhaly::experiment {

namespace {

using nlohmann::json;

constexpr std::pair<Task, std::string_view> kTaskNames[] = {
    {Task::criterion, "criterion"},       {Task::partial_sum, "partial_sum"},
    {Task::shortcut, "shortcut"},         {Task::sections, "sections"},
    {Task::residuals, "residuals"},       {Task::lower_bounds, "lower_bounds"},
    {Task::carleson, "carleson"},
};

bool has_task(const ExperimentConfig& config, Task task) {
  return std::find(config.tasks.begin(), config.tasks.end(), task) !=
         config.tasks.end();
}

Complex complex_from_json(const json& v) {
  if (v.is_array()) {
    if (v.size() != 2) {
      throw InvalidArgument("explicit eta: complex entries are [re, im] pairs");
    }
    return {real_from_json(v[0]), real_from_json(v[1])};
  }
  return {real_from_json(v), 0.0};
}

std::size_t default_max_index(const DyadicGrid& grid) {
  std::size_t top = std::size_t{1} << grid.max_exp;
  return std::max(kDefaultMaxIndex, 16 * top);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgument("cannot write " + path.string());
  }
  out << text;
}

PowerIterationOptions power_options(const ExperimentConfig& config) {
  return {config.tol, config.max_iter, config.seed};
}

struct TaskContext {
  const ExperimentConfig& config;
  const EtaSeq& eta;
  RunResult& result;
  bool numerical_failure = false;
};

void run_criterion_like(TaskContext& ctx, Task task) {
  const auto& c = ctx.config;
  CriterionReport report;
  if (task == Task::criterion) {
    report = criterion(ctx.eta, c.alpha, c.beta, c.n_grid);
  } else if (task == Task::partial_sum) {
    report = partial_sum_form(ctx.eta, c.alpha, c.beta, c.n_grid);
  } else {
    report = decreasing_shortcut(ctx.eta, c.alpha, c.beta, c.n_grid);
  }
  const std::string name(to_string(task));
  ctx.result.tables.emplace_back(name + ".csv", to_csv(report));
  ctx.result.summary["tasks"][name] = to_json(report);
}

void run_sections(TaskContext& ctx) {
  const auto& c = ctx.config;
  std::ostringstream csv;
  csv << "N,sigma_max,iterations,converged\n";
  json values = json::array();
  bool all_converged = true;
  std::vector<double> sigmas;
  for (std::size_t n : c.n_grid.points()) {
    const NormEstimate est =
        section_norm(section(ctx.eta, c.alpha, c.beta, n), power_options(c));
    csv << n << ',' << format_double(est.value) << ',' << est.iterations << ','
        << (est.converged ? 1 : 0) << '\n';
    values.push_back({{"N", n},
                      {"sigma_max", json_real(est.value)},
                      {"iterations", est.iterations},
                      {"converged", est.converged}});
    all_converged = all_converged && est.converged;
    sigmas.push_back(est.value);
  }
  double change = 0.0;
  if (sigmas.size() >= 2 && sigmas.back() > 0.0) {
    change = std::abs(sigmas.back() - sigmas[sigmas.size() - 2]) / sigmas.back();
  }
  ctx.result.tables.emplace_back("sections.csv", csv.str());
  ctx.result.summary["tasks"]["sections"] = {
      {"grid", values},
      {"sigma_max_top", json_real(sigmas.back())},
      {"top_octave_change", json_real(change)},
      {"all_converged", all_converged}};
  if (!all_converged) {
    ctx.numerical_failure = true;
  }
}

void run_residuals(TaskContext& ctx) {
  const auto& c = ctx.config;
  const auto points = c.n_grid.points();
  const std::size_t n_big = points.back();
  std::ostringstream csv;
  csv << "N_cut,residual\n";
  json values = json::array();
  std::vector<double> residuals;
  bool all_converged = true;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const NormEstimate est = residual_norm(ctx.eta, c.alpha, c.beta, points[i],
                                           n_big, power_options(c));
    csv << points[i] << ',' << format_double(est.value) << '\n';
    values.push_back({{"N_cut", points[i]},
                      {"residual", json_real(est.value)},
                      {"iterations", est.iterations},
                      {"converged", est.converged}});
    residuals.push_back(est.value);
    all_converged = all_converged && est.converged;
  }
  // Octave slopes of log2(residual); -inf once a residual underflows to 0.
  json slopes = json::array();
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    slopes.push_back(json_real(std::log2(residuals[i]) - std::log2(residuals[i - 1])));
  }
  ctx.result.tables.emplace_back("residuals.csv", csv.str());
  ctx.result.summary["tasks"]["residuals"] = {{"N_big", n_big},
                                              {"grid", values},
                                              {"log2_slopes", slopes},
                                              {"all_converged", all_converged}};
  if (!all_converged) {
    ctx.numerical_failure = true;
  }
}

void run_lower_bounds(TaskContext& ctx) {
  const auto& c = ctx.config;
  LowerBoundOptions options;
  options.power = power_options(c);
  std::ostringstream csv;
  csv << "test_function,parameter,N,value\n";
  json rows = json::array();
  double best = 0.0;

  auto record = [&](std::string_view kind, double parameter, const Certificate& cert,
                    std::size_t n) {
    csv << kind << ',' << format_double(parameter) << ',' << n << ','
        << format_double(cert.value) << '\n';
    rows.push_back({{"test_function", kind},
                    {"parameter", json_real(parameter)},
                    {"N", n},
                    {"value", json_real(cert.value)},
                    {"section_norm", json_real(cert.parameters.at("section_norm"))}});
    best = std::max(best, cert.value);
  };

  if (c.alpha <= 0.0) {
    // f = 1 against the section of order N: grows without bound exactly when
    // F_(eta) leaves D^2_beta.
    for (std::size_t n : c.n_grid.points()) {
      const EtaSeq eta_n = ctx.eta.truncated(n + 1);
      record("one", static_cast<double>(n),
             lower_bound(eta_n, c.alpha, c.beta, monomial(0), options), n);
    }
  }
  if (c.alpha >= 0.0) {
    for (double b : b_grid()) {
      if (b <= 0.5) {
        continue;  // the test functions need 1/2 < b < 1
      }
      const std::size_t n = default_truncation(b);
      if (n > ctx.eta.max_index()) {
        break;
      }
      const EtaSeq eta_n = ctx.eta.truncated(n + 1);
      if (c.alpha == 0.0) {
        record("h_b", b, lower_bound(eta_n, c.alpha, c.beta, h_b(b, n), options), n);
      } else {
        record("g_b", b,
               lower_bound(eta_n, c.alpha, c.beta, g_b_alpha(b, c.alpha, n), options),
               n);
      }
    }
  }
  ctx.result.tables.emplace_back("lower_bounds.csv", csv.str());
  ctx.result.summary["tasks"]["lower_bounds"] = {{"rows", rows},
                                                 {"max_value", json_real(best)}};
}

void run_carleson(TaskContext& ctx) {
  const auto& c = ctx.config;
  const double s = 1.0 + (c.alpha - c.beta) / 2.0;
  const CarlesonReport report =
      carleson_statistic(c.eta_source.measure, s, dyadic_t_grid());
  ctx.result.tables.emplace_back("carleson.csv", to_csv(report));
  ctx.result.summary["tasks"]["carleson"] = to_json(report);
}

void check_grids(const ExperimentConfig& config, const EtaSeq& eta) {
  const std::size_t top = std::size_t{1} << config.n_grid.max_exp;
  if (top > eta.max_index()) {
    throw InvalidArgument("n_grid top 2^" + std::to_string(config.n_grid.max_exp) +
                          " exceeds the eta length " + std::to_string(eta.size()));
  }
  if (has_task(config, Task::criterion) && 16 * top > eta.size()) {
    throw InvalidArgument("criterion needs eta length >= 16 * 2^max_exp (have " +
                          std::to_string(eta.size()) + ")");
  }
}

/// Headline verdicts: the tail criterion when run, else the first of the
/// alternative forms.
void lift_verdicts(json& summary) {
  if (!summary.contains("tasks")) {
    return;
  }
  for (const char* name : {"criterion", "partial_sum", "shortcut"}) {
    if (summary["tasks"].contains(name)) {
      const json& report = summary["tasks"][name];
      summary["verdict_bounded"] = report["verdict_bounded"];
      summary["verdict_compact"] = report["verdict_compact"];
      return;
    }
  }
}

std::string csv_field(const json& summary, const char* task, const char* key) {
  if (!summary.contains("tasks") || !summary["tasks"].contains(task)) {
    return "";
  }
  const json& v = summary["tasks"][task][key];
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_number()) {
    return format_double(v.get<double>());
  }
  return "";
}

}  // namespace

std::string_view to_string(Task task) {
  for (const auto& [t, name] : kTaskNames) {
    if (t == task) {
      return name;
    }
  }
  return "unknown";
}

Task task_from_string(std::string_view name) {
  for (const auto& [t, known] : kTaskNames) {
    if (known == name) {
      return t;
    }
  }
  throw InvalidArgument("unknown task: " + std::string(name));
}

std::string EtaSource::label() const {
  switch (kind) {
    case Kind::classical:
      return "classical";
    case Kind::power_log:
      return "power_log(s=" + format_double(s) + ";r=" + format_double(r) + ")";
    case Kind::measure: {
      std::string out = "measure(";
      bool first = true;
      for (const Atom& a : measure.atoms) {
        out += (first ? "" : "+");
        out += format_double(a.mass) + "@" + format_double(a.location);
        first = false;
      }
      if (measure.density) {
        out += (first ? "" : "+");
        out += format_double(measure.density->scale) + "*(1-t)^" +
               format_double(measure.density->gamma);
      }
      return out + ")";
    }
    case Kind::explicit_values:
      return "explicit(len=" + std::to_string(values.size()) + ")";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidArgument("alpha and beta must be finite");
  }
  if (tasks.empty()) {
    throw InvalidArgument("config lists no tasks");
  }
  if (n_grid.min_exp < 1 || n_grid.max_exp < n_grid.min_exp || n_grid.max_exp > 40) {
    throw InvalidArgument("n_grid needs 1 <= min_exp <= max_exp <= 40");
  }
  if (!(tol > 0.0) || max_iter < 1) {
    throw InvalidArgument("power iteration needs tol > 0 and max_iter >= 1");
  }
  if (output_format != "csv") {
    throw InvalidArgument("unsupported output format: " + output_format);
  }
  if (eta_source.kind == EtaSource::Kind::measure) {
    eta_source.measure.validate();
  }
  if (eta_source.kind == EtaSource::Kind::explicit_values) {
    if (eta_source.values.empty()) {
      throw InvalidArgument("explicit eta needs at least one value");
    }
    if (n_max && *n_max + 1 != eta_source.values.size()) {
      throw InvalidArgument("n_max disagrees with the explicit eta length");
    }
  }
  if (has_task(*this, Task::carleson)) {
    if (eta_source.kind != EtaSource::Kind::measure) {
      throw InvalidArgument("carleson task needs a measure eta source");
    }
    if (!(alpha > 0.0) || !(beta < alpha + 2.0)) {
      throw InvalidArgument("carleson task needs alpha > 0 and beta < alpha + 2");
    }
  }
}

EtaSeq ExperimentConfig::make_eta() const {
  const std::size_t n = n_max.value_or(default_max_index(n_grid));
  switch (eta_source.kind) {
    case EtaSource::Kind::classical:
      return classical_cesaro(n);
    case EtaSource::Kind::power_log:
      return power_log_family(eta_source.s, eta_source.r, n);
    case EtaSource::Kind::measure:
      return measure_moments(eta_source.measure, n);
    case EtaSource::Kind::explicit_values:
      return explicit_eta(eta_source.values);
  }
  throw InvalidArgument("unknown eta source");
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw InvalidArgument("config must be a JSON object");
  }
  ExperimentConfig config;
  try {
    const json& src = doc.at("eta_source");
    const std::string type =
        src.is_string() ? src.get<std::string>() : src.at("type").get<std::string>();
    if (type == "classical") {
      config.eta_source.kind = EtaSource::Kind::classical;
    } else if (type == "power_log") {
      config.eta_source.kind = EtaSource::Kind::power_log;
      config.eta_source.s = src.at("s").get<double>();
      config.eta_source.r = src.value("r", 0.0);
    } else if (type == "measure") {
      config.eta_source.kind = EtaSource::Kind::measure;
      config.eta_source.measure = measure_from_json(src.at("measure"));
    } else if (type == "explicit") {
      config.eta_source.kind = EtaSource::Kind::explicit_values;
      for (const json& v : src.at("values")) {
        config.eta_source.values.push_back(complex_from_json(v));
      }
    } else {
      throw InvalidArgument("unknown eta_source type: " + type);
    }

    config.alpha = doc.at("alpha").get<double>();
    config.beta = doc.at("beta").get<double>();
    if (doc.contains("n_grid")) {
      config.n_grid.min_exp = doc["n_grid"].value("min_exp", config.n_grid.min_exp);
      config.n_grid.max_exp = doc["n_grid"].value("max_exp", config.n_grid.max_exp);
    }
    if (doc.contains("n_max")) {
      config.n_max = doc["n_max"].get<std::size_t>();
    } else if (config.eta_source.kind == EtaSource::Kind::explicit_values) {
      config.n_max = config.eta_source.values.empty()
                         ? 0
                         : config.eta_source.values.size() - 1;
    }
    for (const json& t : doc.at("tasks")) {
      config.tasks.push_back(task_from_string(t.get<std::string>()));
    }
    config.seed = doc.value("seed", config.seed);
    if (doc.contains("power")) {
      config.tol = doc["power"].value("tol", config.tol);
      config.max_iter = doc["power"].value("max_iter", config.max_iter);
    }
    if (doc.contains("output")) {
      const json& out = doc["output"];
      config.output_dir = out.value("dir", std::string{});
      config.output_format = out.value("format", config.output_format);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  return config;
}

json to_json(const ExperimentConfig& config) {
  json src;
  switch (config.eta_source.kind) {
    case EtaSource::Kind::classical:
      src = {{"type", "classical"}};
      break;
    case EtaSource::Kind::power_log:
      src = {{"type", "power_log"}, {"s", config.eta_source.s}, {"r", config.eta_source.r}};
      break;
    case EtaSource::Kind::measure:
      src = {{"type", "measure"}, {"measure", to_json(config.eta_source.measure)}};
      break;
    case EtaSource::Kind::explicit_values: {
      json values = json::array();
      for (const Complex& v : config.eta_source.values) {
        if (v.imag() == 0.0) {
          values.push_back(v.real());
        } else {
          values.push_back({v.real(), v.imag()});
        }
      }
      src = {{"type", "explicit"}, {"values", values}};
      break;
    }
  }
  json tasks = json::array();
  for (Task t : config.tasks) {
    tasks.push_back(to_string(t));
  }
  json doc{{"eta_source", src},
           {"alpha", config.alpha},
           {"beta", config.beta},
           {"n_grid", {{"min_exp", config.n_grid.min_exp}, {"max_exp", config.n_grid.max_exp}}},
           {"tasks", tasks},
           {"seed", config.seed},
           {"power", {{"tol", config.tol}, {"max_iter", config.max_iter}}},
           {"output", {{"dir", config.output_dir.string()}, {"format", config.output_format}}}};
  if (config.n_max) {
    doc["n_max"] = *config.n_max;
  }
  return doc;
}

std::vector<ExperimentConfig> sweep_configs_from_json(const json& doc) {
  std::vector<ExperimentConfig> configs;
  if (doc.is_array()) {
    for (const json& item : doc) {
      configs.push_back(config_from_json(item));
    }
    return configs;
  }
  if (!doc.is_object() || !doc.contains("base")) {
    throw InvalidArgument("sweep file must be an array of configs or {\"base\": ...}");
  }
  const ExperimentConfig base = config_from_json(doc["base"]);
  std::vector<double> alphas{base.alpha};
  std::vector<double> betas{base.beta};
  try {
    if (doc.contains("alpha")) {
      alphas = doc["alpha"].get<std::vector<double>>();
    }
    if (doc.contains("beta")) {
      betas = doc["beta"].get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed sweep grid: ") + e.what());
  }
  for (double a : alphas) {
    for (double b : betas) {
      ExperimentConfig c = base;
      c.alpha = a;
      c.beta = b;
      configs.push_back(std::move(c));
    }
  }
  return configs;
}

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  result.summary = {{"config", to_json(config)}};
  try {
    config.validate();
    const EtaSeq eta = config.make_eta();
    check_grids(config, eta);
    result.summary["eta_source"] = config.eta_source.label();
    result.summary["eta_provenance"] = eta.provenance();
    result.summary["n_max"] = eta.max_index();
    result.summary["tasks"] = json::object();

    TaskContext ctx{config, eta, result};
    for (Task task : config.tasks) {
      switch (task) {
        case Task::criterion:
        case Task::partial_sum:
        case Task::shortcut:
          run_criterion_like(ctx, task);
          break;
        case Task::sections:
          run_sections(ctx);
          break;
        case Task::residuals:
          run_residuals(ctx);
          break;
        case Task::lower_bounds:
          run_lower_bounds(ctx);
          break;
        case Task::carleson:
          run_carleson(ctx);
          break;
      }
    }
    if (ctx.numerical_failure) {
      result.exit_code = kExitNumerical;
      result.error = "power iteration did not converge";
    }
  } catch (const InvalidArgument& e) {
    result.exit_code = kExitValidation;
    result.error = e.what();
  } catch (const NumericalError& e) {
    result.exit_code = kExitNumerical;
    result.error = e.what();
  }
  lift_verdicts(result.summary);
  result.summary["exit_code"] = result.exit_code;
  if (!result.error.empty()) {
    result.summary["error"] = result.error;
  }

  if (!config.output_dir.empty()) {
    try {
      std::filesystem::create_directories(config.output_dir);
      for (const auto& [name, text] : result.tables) {
        write_text(config.output_dir / name, text);
      }
      write_text(config.output_dir / "summary.json", result.summary.dump(2) + "\n");
    } catch (const std::exception& e) {
      if (result.exit_code == kExitOk) {
        result.exit_code = kExitValidation;
        result.error = e.what();
      }
    }
  }
  return result;
}

SweepResult sweep(std::vector<ExperimentConfig> configs,
                  const std::filesystem::path& out_dir, int jobs) {
  SweepResult result;
  result.runs.resize(configs.size());
  if (!out_dir.empty()) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      configs[i].output_dir = out_dir / ("config_" + std::to_string(i));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      result.runs[i] = run(configs[i]);
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), configs.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) {
    threads.emplace_back(worker);
  }
  worker();
  for (auto& th : threads) {
    th.join();
  }

  std::ostringstream csv;
  csv << "eta_source,alpha,beta,exit_code,verdict_bounded,verdict_compact,sup_S,"
         "slope,sigma_max_top\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const RunResult& r = result.runs[i];
    const json& s = r.summary;
    const char* form = "criterion";
    for (const char* name : {"criterion", "partial_sum", "shortcut"}) {
      if (s.contains("tasks") && s["tasks"].contains(name)) {
        form = name;
        break;
      }
    }
    csv << configs[i].eta_source.label() << ',' << format_double(configs[i].alpha)
        << ',' << format_double(configs[i].beta) << ',' << r.exit_code << ','
        << csv_field(s, form, "verdict_bounded") << ','
        << csv_field(s, form, "verdict_compact") << ',' << csv_field(s, form, "sup_S")
        << ',' << csv_field(s, form, "slope") << ','
        << csv_field(s, "sections", "sigma_max_top") << '\n';
    if (r.exit_code != kExitOk && result.exit_code == kExitOk) {
      result.exit_code = r.exit_code;
      result.error = "config " + std::to_string(i) + " (" +
                     configs[i].eta_source.label() + ", alpha=" +
                     format_double(configs[i].alpha) + ", beta=" +
                     format_double(configs[i].beta) + "): " + r.error;
    }
  }
  result.table_csv = csv.str();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text(out_dir / "sweep.csv", result.table_csv);
  }
  return result;
}

}  // namespace rhaly::experiment
