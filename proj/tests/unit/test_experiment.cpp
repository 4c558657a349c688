#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rhaly/error.hpp"
#include "rhaly/experiment.hpp"

namespace ex = rhaly::experiment;
using nlohmann::json;

namespace {

ex::ExperimentConfig parse(const char* text) { return ex::config_from_json(json::parse(text)); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rhaly_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
      cells.emplace_back();
    }
    rows.push_back(cells);
  }
  return rows;
}

// Re-derives the headline verdicts from (N, S_N) rows with the documented
// thresholds, independently of the library's classifier.
std::pair<std::string, std::string> verdicts_from_rows(
    const std::vector<std::vector<std::string>>& rows) {
  std::vector<double> x, s;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    x.push_back(std::log(std::stod(rows[i][0])));
    s.push_back(std::stod(rows[i][2]));
  }
  if (!std::isfinite(s.back()) || std::isinf(s.back())) {
    return {"fails", "fails"};
  }
  if (s.back() == 0.0) {
    return {"holds", "holds"};
  }
  const std::size_t lo = x.size() / 2;
  double mx = 0, my = 0;
  for (std::size_t i = lo; i < x.size(); ++i) {
    mx += x[i];
    my += std::log(s[i]);
  }
  mx /= double(x.size() - lo);
  my /= double(x.size() - lo);
  double sxy = 0, sxx = 0;
  for (std::size_t i = lo; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (std::log(s[i]) - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  const std::size_t k = x.size() - 1;
  const double last = (std::log(s[k]) - std::log(s[k - 1])) / (x[k] - x[k - 1]);
  std::string bounded = "inconclusive";
  if (slope <= 0.05 + 1e-9) {
    bounded = "holds";
  } else if (slope >= 0.1 - 1e-9 && last >= 0.1 - 1e-9) {
    bounded = "fails";
  }
  std::string compact = "inconclusive";
  if (bounded == "fails" || slope > -0.025 + 1e-9) {
    compact = "fails";
  } else if (slope <= -0.05 + 1e-9) {
    compact = "holds";
  }
  return {bounded, compact};
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto c = parse(R"({"eta_source": {"type": "power_log", "s": 1.5, "r": 2},
                           "alpha": 0.5, "beta": -1, "n_grid": {"min_exp": 3, "max_exp": 9},
                           "tasks": ["criterion", "sections"], "seed": 9,
                           "output": {"dir": "x", "format": "csv"}})");
  CHECK(c.eta_source.kind == ex::EtaSource::Kind::power_log);
  CHECK(c.eta_source.s == 1.5);
  CHECK(c.eta_source.label() == "power_log(s=1.5;r=2)");
  CHECK(c.n_grid.max_exp == 9);
  CHECK(c.tasks.size() == 2);
  CHECK(c.seed == 9);
  CHECK(c.output_dir == "x");
  CHECK(ex::config_from_json(ex::to_json(c)).eta_source.label() == c.eta_source.label());

  const auto defaults = parse(R"({"eta_source": "classical", "alpha": 1, "beta": 1,
                                  "tasks": ["criterion"]})");
  CHECK(defaults.seed == 42);
  CHECK(defaults.n_grid.min_exp == 4);
  CHECK(defaults.n_grid.max_exp == 16);
  CHECK(defaults.make_eta().max_index() == std::size_t{1} << 20);

  CHECK_THROWS_AS(parse(R"({"eta_source": "classical", "alpha": 1, "beta": 1,
                           "tasks": ["nonsense"]})"),
                  rhaly::InvalidArgument);
  CHECK_THROWS_AS(parse(R"({"eta_source": {"type": "wavelet"}, "alpha": 1, "beta": 1,
                           "tasks": ["criterion"]})"),
                  rhaly::InvalidArgument);
  CHECK_THROWS_AS(parse(R"({"alpha": 1, "beta": 1, "tasks": ["criterion"]})"),
                  rhaly::InvalidArgument);
  CHECK_THROWS_AS(parse(R"([1, 2])"), rhaly::InvalidArgument);
}

TEST_CASE("validation failures exit with code 2") {
  auto no_tasks = parse(R"({"eta_source": "classical", "alpha": 1, "beta": 1, "tasks": []})");
  CHECK(ex::run(no_tasks).exit_code == ex::kExitValidation);

  auto too_long = parse(R"({"eta_source": "classical", "alpha": 1, "beta": 1, "n_max": 4096,
                            "n_grid": {"min_exp": 4, "max_exp": 9}, "tasks": ["criterion"]})");
  auto r = ex::run(too_long);
  CHECK(r.exit_code == ex::kExitValidation);
  CHECK(r.error.find("16 * 2^max_exp") != std::string::npos);

  auto carleson_classical = parse(R"({"eta_source": "classical", "alpha": 1, "beta": 1,
                                      "tasks": ["carleson"]})");
  CHECK(ex::run(carleson_classical).exit_code == ex::kExitValidation);

  auto non_monotone = parse(R"({"eta_source": {"type": "explicit",
                                 "values": [1, 0.1, 0.5, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1,
                                            0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]},
                                "alpha": 1, "beta": 0, "n_grid": {"min_exp": 1, "max_exp": 4},
                                "tasks": ["shortcut"]})");
  CHECK(ex::run(non_monotone).exit_code == ex::kExitValidation);

  auto bad_format = parse(R"({"eta_source": "classical", "alpha": 1, "beta": 1,
                              "tasks": ["criterion"], "output": {"format": "xlsx"}})");
  CHECK(ex::run(bad_format).exit_code == ex::kExitValidation);
}

TEST_CASE("non-convergence exits with code 3") {
  auto c = parse(R"({"eta_source": "classical", "alpha": 0, "beta": 0,
                     "n_grid": {"min_exp": 6, "max_exp": 9}, "tasks": ["sections"],
                     "power": {"tol": 1e-15, "max_iter": 4}})");
  const auto r = ex::run(c);
  CHECK(r.exit_code == ex::kExitNumerical);
  CHECK(r.summary["tasks"]["sections"]["all_converged"] == false);
  REQUIRE(r.tables.size() == 1);
  CHECK(r.tables[0].second.find(",4,0\n") != std::string::npos);
}

TEST_CASE("classical operator on D^2_1: bounded, stable sections") {
  auto c = parse(R"({"eta_source": "classical", "alpha": 1, "beta": 1,
                     "n_grid": {"min_exp": 4, "max_exp": 12},
                     "tasks": ["criterion", "sections"]})");
  c.output_dir = scratch("classical");
  const auto r = ex::run(c);
  REQUIRE(r.exit_code == ex::kExitOk);
  CHECK(r.summary["verdict_bounded"] == "holds");
  CHECK(r.summary["verdict_compact"] == "fails");
  CHECK(r.summary["tasks"]["sections"]["all_converged"] == true);
  CHECK(r.summary["tasks"]["sections"]["top_octave_change"].get<double>() < 0.05);

  const std::string crit = slurp(c.output_dir / "criterion.csv");
  CHECK(crit.rfind("N,A_N,S_N\n", 0) == 0);
  const std::string sec = slurp(c.output_dir / "sections.csv");
  CHECK(sec.rfind("N,sigma_max,iterations,converged\n", 0) == 0);
  const auto summary = json::parse(slurp(c.output_dir / "summary.json"));
  CHECK(summary["verdict_bounded"] == "holds");

  const auto [b, k] = verdicts_from_rows(read_csv(crit));
  CHECK(b == summary["verdict_bounded"]);
  CHECK(k == summary["verdict_compact"]);
}

TEST_CASE("point mass: compact with geometric residual decay") {
  auto c = parse(R"({"eta_source": {"type": "measure", "measure": {"atoms": [{"t": 0.9, "mass": 1}]}},
                     "alpha": 1, "beta": 0, "n_grid": {"min_exp": 6, "max_exp": 11},
                     "tasks": ["criterion", "residuals", "carleson"]})");
  const auto r = ex::run(c);
  REQUIRE(r.exit_code == ex::kExitOk);
  CHECK(r.summary["verdict_compact"] == "holds");
  CHECK(r.summary["tasks"]["carleson"]["verdict_compact"] == "holds");
  const auto& slopes = r.summary["tasks"]["residuals"]["log2_slopes"];
  REQUIRE(slopes.size() == 4);
  for (const auto& s : slopes) {
    if (s.is_number()) {
      CHECK(s.get<double>() <= -2.0);
    } else {
      CHECK(s == "-inf");
    }
  }
  bool saw_residuals = false;
  for (const auto& [name, text] : r.tables) {
    if (name == "residuals.csv") {
      saw_residuals = true;
      CHECK(text.rfind("N_cut,residual\n64,", 0) == 0);
    }
    if (name == "carleson.csv") {
      CHECK(text.rfind("t,ratio\n", 0) == 0);
    }
  }
  CHECK(saw_residuals);
}

TEST_CASE("zero multiplier: all norms 0, verdicts hold") {
  json values = json::array();
  for (int i = 0; i < 4097; ++i) {
    values.push_back(0.0);
  }
  for (double alpha : {-1.0, 0.0, 1.0}) {
    json doc{{"eta_source", {{"type", "explicit"}, {"values", values}}},
             {"alpha", alpha},
             {"beta", 0.0},
             {"n_grid", {{"min_exp", 4}, {"max_exp", 8}}},
             {"tasks", alpha > 0 ? json{"criterion", "partial_sum", "shortcut", "sections",
                                        "residuals"}
                                 : json{"criterion", "sections", "residuals"}}};
    const auto r = ex::run(ex::config_from_json(doc));
    REQUIRE(r.exit_code == ex::kExitOk);
    CHECK(r.summary["verdict_bounded"] == "holds");
    CHECK(r.summary["verdict_compact"] == "holds");
    for (const char* form : {"criterion", "partial_sum", "shortcut"}) {
      if (r.summary["tasks"].contains(form)) {
        CHECK(r.summary["tasks"][form]["verdict_bounded"] == "holds");
        CHECK(r.summary["tasks"][form]["verdict_compact"] == "holds");
      }
    }
    for (const auto& row : r.summary["tasks"]["sections"]["grid"]) {
      CHECK(row["sigma_max"] == 0.0);
    }
    for (const auto& row : r.summary["tasks"]["residuals"]["grid"]) {
      CHECK(row["residual"] == 0.0);
    }
  }
}

TEST_CASE("lower-bound task follows the regime") {
  auto c = parse(R"({"eta_source": "classical", "alpha": 0, "beta": 0,
                     "n_grid": {"min_exp": 4, "max_exp": 8}, "n_max": 70000,
                     "tasks": ["lower_bounds"]})");
  auto r = ex::run(c);
  REQUIRE(r.exit_code == ex::kExitOk);
  const auto& rows = r.summary["tasks"]["lower_bounds"]["rows"];
  int ones = 0, hb = 0;
  for (const auto& row : rows) {
    ones += row["test_function"] == "one";
    hb += row["test_function"] == "h_b";
    CHECK(row["value"].get<double>() <= row["section_norm"].get<double>() * (1 + 1e-8));
  }
  CHECK(ones == 5);
  CHECK(hb == 11);  // 2 <= j <= 12: b > 1/2 and 16 / (1 - b) <= 70000

  c.alpha = 2.0;
  r = ex::run(c);
  REQUIRE(r.exit_code == ex::kExitOk);
  for (const auto& row : r.summary["tasks"]["lower_bounds"]["rows"]) {
    CHECK(row["test_function"] == "g_b");
  }
}

TEST_CASE("identical configs give byte-identical output") {
  auto c = parse(R"({"eta_source": {"type": "power_log", "s": 1, "r": 1},
                     "alpha": 0, "beta": 0, "n_grid": {"min_exp": 4, "max_exp": 10},
                     "tasks": ["criterion", "sections", "residuals"], "seed": 1234})");
  c.output_dir = scratch("det_a");
  const auto a = ex::run(c);
  c.output_dir = scratch("det_b");
  const auto b = ex::run(c);
  REQUIRE(a.tables.size() == 3);
  for (const char* name : {"criterion.csv", "sections.csv", "residuals.csv"}) {
    CHECK(slurp(std::filesystem::temp_directory_path() / "rhaly_test_det_a" / name) ==
          slurp(c.output_dir / name));
  }
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    CHECK(a.tables[i] == b.tables[i]);
  }
}

TEST_CASE("sweep over the classical (alpha, beta) grid") {
  const auto configs = ex::sweep_configs_from_json(json::parse(R"({
      "base": {"eta_source": "classical", "alpha": 0, "beta": 0,
               "n_grid": {"min_exp": 4, "max_exp": 14}, "tasks": ["criterion"]},
      "alpha": [0, 1, 2], "beta": [0, 1, 2]})"));
  REQUIRE(configs.size() == 9);
  const auto out = scratch("sweep");
  const auto r = ex::sweep(configs, out, 3);
  CHECK(r.exit_code == ex::kExitOk);
  const auto rows = read_csv(r.table_csv);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0][0] == "eta_source");
  // Bounded exactly when beta >= alpha and beta > 0 (tail exponent
  // sum n^(1-beta) / n^2 against N^-alpha or 1/log N).
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double alpha = std::stod(rows[i][1]);
    const double beta = std::stod(rows[i][2]);
    INFO("alpha=" << alpha << " beta=" << beta);
    CHECK(rows[i][0] == "classical");
    CHECK(rows[i][4] == ((beta >= alpha && beta > 0) ? "holds" : "fails"));
  }
  CHECK(std::filesystem::exists(out / "config_4" / "criterion.csv"));
  CHECK(slurp(out / "sweep.csv") == r.table_csv);
}

TEST_CASE("sweep edge cases") {
  const auto empty = ex::sweep({}, "", 4);
  CHECK(empty.exit_code == ex::kExitOk);
  CHECK(read_csv(empty.table_csv).size() == 1);

  const auto one = parse(R"({"eta_source": "classical", "alpha": 1, "beta": 0,
                             "n_grid": {"min_exp": 4, "max_exp": 9}, "tasks": ["criterion"]})");
  const auto dup = ex::sweep({one, one, one}, "", 2);
  const auto rows = read_csv(dup.table_csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1] == rows[2]);
  CHECK(rows[2] == rows[3]);

  auto broken = one;
  broken.tasks.clear();
  const auto failed = ex::sweep({one, broken, one}, "", 1);
  CHECK(failed.exit_code == ex::kExitValidation);
  CHECK(failed.error.rfind("config 1 ", 0) == 0);
  CHECK(read_csv(failed.table_csv).size() == 4);
}

TEST_CASE("sweep documents") {
  const auto list = ex::sweep_configs_from_json(json::parse(R"([
      {"eta_source": "classical", "alpha": 1, "beta": 1, "tasks": ["criterion"]},
      {"eta_source": "classical", "alpha": 2, "beta": 1, "tasks": ["criterion"]}])"));
  CHECK(list.size() == 2);
  CHECK(list[1].alpha == 2.0);
  CHECK(ex::sweep_configs_from_json(json::parse("[]")).empty());
  CHECK_THROWS_AS(ex::sweep_configs_from_json(json::parse(R"({"alpha": [1]})")),
                  rhaly::InvalidArgument);
}
