#include "rhaly/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "rhaly/compensated.hpp"
#include "rhaly/error.hpp"
#include "rhaly/format.hpp"
#include "rhaly/quadrature.hpp"

namespace rhaly {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integration of the modelled tail in u = log x.
constexpr int kUnitPanels = 64;
constexpr double kPanelGrowth = 0.25;
constexpr double kLogIndexCap = 1e8;
constexpr double kMinConvergentExponent = 1.05;
constexpr double kEps = std::numeric_limits<double>::epsilon();

Regime regime_of(double alpha) {
  if (alpha < 0.0) {
    return Regime::alpha_neg;
  }
  return alpha == 0.0 ? Regime::alpha_zero : Regime::alpha_pos;
}

std::vector<std::size_t> checked_points(const DyadicGrid& grid) {
  if (grid.min_exp < 0 || grid.max_exp > 62 || grid.min_exp > grid.max_exp) {
    throw InvalidArgument("grid: need 0 <= min_exp <= max_exp <= 62");
  }
  auto points = grid.points();
  if (points.size() < 4) {
    throw InvalidArgument("grid: too coarse, need at least 4 dyadic points");
  }
  return points;
}

void require_alpha_positive(double alpha, const char* who) {
  if (!(alpha > 0.0)) {
    throw InvalidArgument(std::string(who) + ": requires alpha > 0");
  }
}

double slope_between(double x0, double s0, double x1, double s1) {
  return (std::log(s1) - std::log(s0)) / (std::log(x1) - std::log(x0));
}

void fill_summary(CriterionReport& report) {
  std::vector<double> xs;
  std::vector<double> ss;
  report.sup_s = 0.0;
  for (const auto& p : report.grid) {
    xs.push_back(static_cast<double>(p.n));
    ss.push_back(p.statistic);
    report.sup_s = std::max(report.sup_s, p.statistic);
    if (std::isnan(p.statistic)) {
      report.sup_s = p.statistic;
    }
  }
  const Classification c = classify(xs, ss);
  report.slope = c.slope;
  report.last_slope = c.last_slope;
  report.verdict_bounded = c.bounded;
  report.verdict_compact = c.compact;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::alpha_neg:
      return "alpha_neg";
    case Regime::alpha_zero:
      return "alpha_zero";
    case Regime::alpha_pos:
      return "alpha_pos";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

Verdict verdict_from_string(std::string_view text) {
  if (text == "holds") {
    return Verdict::holds;
  }
  if (text == "fails") {
    return Verdict::fails;
  }
  if (text == "inconclusive") {
    return Verdict::inconclusive;
  }
  throw InvalidArgument("unknown verdict '" + std::string(text) + "'");
}

std::vector<std::size_t> DyadicGrid::points() const {
  std::vector<std::size_t> out;
  for (int k = min_exp; k <= max_exp; ++k) {
    out.push_back(std::size_t{1} << k);
  }
  return out;
}

Classification classify(std::span<const double> x, std::span<const double> s) {
  if (x.size() != s.size()) {
    throw InvalidArgument("classify: abscissae and statistic differ in length");
  }
  Classification c;
  const std::size_t count = s.size();
  if (std::any_of(s.begin(), s.end(), [](double v) { return !std::isfinite(v); })) {
    c.slope = kInf;
    c.last_slope = kInf;
    c.bounded = Verdict::fails;
    c.compact = Verdict::fails;
    return c;
  }
  if (count < 2) {
    return c;
  }
  if (s[count - 1] == 0.0) {
    c.slope = -kInf;
    c.last_slope = -kInf;
    c.bounded = Verdict::holds;
    c.compact = Verdict::holds;
    return c;
  }

  // Least squares of log s on log x over the upper half, positive samples.
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  int used = 0;
  for (std::size_t i = count / 2; i < count; ++i) {
    if (s[i] > 0.0) {
      const double lx = std::log(x[i]);
      const double ly = std::log(s[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++used;
    }
  }
  if (used < 2) {
    return c;
  }
  const double denom = used * sxx - sx * sx;
  c.slope = (used * sxy - sx * sy) / denom;
  c.last_slope = s[count - 2] > 0.0
                     ? slope_between(x[count - 2], s[count - 2], x[count - 1],
                                     s[count - 1])
                     : kInf;

  if (c.slope <= kBoundedHoldsSlope + kSlopeEpsilon) {
    c.bounded = Verdict::holds;
  } else if (c.slope >= kBoundedFailsSlope - kSlopeEpsilon &&
             c.last_slope >= kBoundedFailsSlope - kSlopeEpsilon) {
    c.bounded = Verdict::fails;
  }

  if (c.bounded == Verdict::fails) {
    c.compact = Verdict::fails;
  } else if (c.slope <= kCompactHoldsSlope + kSlopeEpsilon) {
    c.compact = Verdict::holds;
  } else if (c.slope > kCompactFailsSlope) {
    c.compact = Verdict::fails;
  }
  return c;
}

TailEstimate tail_beyond(const EtaSeq& eta, double beta) {
  TailEstimate out;
  if (!eta.tail_model()) {
    return out;
  }
  out.modelled = true;
  const auto& log_eta = eta.tail_model()->log_abs_at_log_index;
  // x^(1-beta) |eta(x)|^2 dx = exp(h(u)) du with x = e^u.
  const auto h = [&](double u) { return (2.0 - beta) * u + 2.0 * log_eta(u); };
  const auto integrand = [&](double u) { return std::exp(h(u)); };

  const auto n_max = static_cast<double>(eta.max_index());
  // Midpoint start: for a monotone summand, sum_{n > M} g(n) lies within
  // g(M) of the integral from M + 1/2.
  const double m = std::max(n_max, 1.0);
  out.uncertainty = std::exp(h(std::log(m)) - std::log(m));

  CompensatedSum<double> total;
  double ua = std::log(n_max + 0.5);
  for (int panel = 0;; ++panel) {
    const double width = panel < kUnitPanels ? 1.0 : kPanelGrowth * ua;
    const double ub = std::min(ua + width, kLogIndexCap);
    // h(u) cancels two terms of size u, so the integrand carries relative
    // rounding noise of order u * eps; asking for more than that never ends.
    const double tol = std::max(1e-12, 32.0 * kEps * ub);
    const double piece = quadrature::integrate(integrand, ua, ub, tol, 0.0, 30);
    total += piece;
    out.uncertainty += tol * std::abs(piece);
    const double sum = total.value();
    if (!std::isfinite(sum)) {
      out.estimate = kInf;
      return out;
    }
    const double ha = h(ua);
    const double hb = h(ub);
    const bool decaying = hb < ha;
    if (panel >= 1 && decaying &&
        (piece <= 1e-17 * sum || (sum == 0.0 && hb < -800.0))) {
      break;
    }
    if (ub >= kLogIndexCap) {
      // Remainder for an integrand behaving like u^-q past the cap.
      const double q = -(hb - h(ub / 1.25)) / std::log(1.25);
      if (!(q > kMinConvergentExponent)) {
        out.estimate = kInf;
        return out;
      }
      const double remainder = std::exp(hb) * ub / (q - 1.0);
      total += remainder;
      out.uncertainty += remainder;
      break;
    }
    ua = ub;
  }
  out.estimate = total.value();
  return out;
}

TailSum tail_sum(const EtaSeq& eta, double beta, std::size_t n) {
  if (n < 1 || n > eta.size()) {
    throw InvalidArgument("tail_sum: need 1 <= N <= length(eta)");
  }
  CompensatedSum<double> sum;
  for (std::size_t k = eta.max_index(); k >= n && k >= 1; --k) {
    sum += std::pow(static_cast<double>(k), 1.0 - beta) * std::norm(eta[k]);
  }
  return TailSum{sum.value(), tail_beyond(eta, beta)};
}

CriterionReport criterion(const EtaSeq& eta, double alpha, double beta,
                          const DyadicGrid& grid) {
  const auto points = checked_points(grid);
  const Regime regime = regime_of(alpha);
  if (points.back() > eta.size() / 16) {
    throw InvalidArgument("criterion: top grid point " +
                          std::to_string(points.back()) +
                          " exceeds length(eta)/16 = " +
                          std::to_string(eta.size() / 16));
  }
  if (regime == Regime::alpha_zero && points.front() < 2) {
    throw InvalidArgument("criterion: alpha = 0 needs grid points N >= 2");
  }

  CriterionReport report;
  report.form = "tail";
  report.regime = regime;
  report.alpha = alpha;
  report.beta = beta;
  report.tail = tail_beyond(eta, beta);

  // One pass from the top index down, sampling at the grid points.
  std::vector<double> truncated(points.size());
  CompensatedSum<double> sum;
  std::size_t next = points.size();
  for (std::size_t k = eta.max_index(); k >= points.front(); --k) {
    sum += std::pow(static_cast<double>(k), 1.0 - beta) * std::norm(eta[k]);
    while (next > 0 && points[next - 1] == k) {
      truncated[--next] = sum.value();
    }
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto n = static_cast<double>(points[i]);
    const double a_n = truncated[i] + report.tail.estimate;
    double phi = 1.0;
    if (regime == Regime::alpha_zero) {
      phi = std::log(n);
    } else if (regime == Regime::alpha_pos) {
      phi = std::pow(n, alpha);
    }
    report.grid.push_back({points[i], a_n, a_n * phi});
  }
  fill_summary(report);

  if (regime == Regime::alpha_neg) {
    // Bounded <=> compact <=> F_(eta) in D^2_beta <=> A_N finite.
    const bool finite = std::isfinite(report.tail.estimate);
    report.verdict_bounded = finite ? Verdict::holds : Verdict::fails;
    report.verdict_compact = report.verdict_bounded;
    return report;
  }
  const double top = report.grid.back().aggregate;
  if (std::isfinite(report.tail.estimate) && report.tail.uncertainty > 0.0 &&
      !(report.tail.uncertainty < kTailUncertaintyFraction * top)) {
    report.verdict_bounded = Verdict::inconclusive;
    report.verdict_compact = Verdict::inconclusive;
  }
  return report;
}

CriterionReport partial_sum_form(const EtaSeq& eta, double alpha, double beta,
                                 const DyadicGrid& grid) {
  require_alpha_positive(alpha, "partial_sum_form");
  const auto points = checked_points(grid);
  if (points.back() > eta.max_index()) {
    throw InvalidArgument("partial_sum_form: top grid point beyond eta");
  }
  CriterionReport report;
  report.form = "partial_sum";
  report.regime = Regime::alpha_pos;
  report.alpha = alpha;
  report.beta = beta;

  CompensatedSum<double> sum;
  std::size_t next = 0;
  for (std::size_t k = 1; k <= points.back(); ++k) {
    const auto x = static_cast<double>(k);
    sum += std::pow(x, 1.0 + 2.0 * alpha - beta) * std::norm(eta[k]);
    if (k == points[next]) {
      const double p = sum.value();
      report.grid.push_back({k, p, std::pow(x, -alpha) * p});
      ++next;
    }
  }
  fill_summary(report);
  return report;
}

CriterionReport decreasing_shortcut(const EtaSeq& eta, double alpha,
                                    double beta, const DyadicGrid& grid) {
  require_alpha_positive(alpha, "decreasing_shortcut");
  const auto points = checked_points(grid);
  if (points.back() > eta.max_index()) {
    throw InvalidArgument("decreasing_shortcut: top grid point beyond eta");
  }
  for (std::size_t n = 0; n + 1 < eta.size(); ++n) {
    const double now = std::abs(eta[n]);
    const double next = std::abs(eta[n + 1]);
    if (next > now * (1.0 + 1e-12)) {
      throw NonMonotoneError("decreasing_shortcut: |eta_n| increases at n = " +
                             std::to_string(n));
    }
  }
  CriterionReport report;
  report.form = "shortcut";
  report.regime = Regime::alpha_pos;
  report.alpha = alpha;
  report.beta = beta;
  const bool scaled = beta < alpha + 2.0;
  const double exponent = 1.0 + 0.5 * (alpha - beta);
  for (std::size_t n : points) {
    const double magnitude = std::abs(eta[n]);
    const double stat =
        scaled ? magnitude * std::pow(static_cast<double>(n), exponent) : magnitude;
    report.grid.push_back({n, magnitude, stat});
  }
  fill_summary(report);
  return report;
}

std::vector<double> dyadic_t_grid(int levels) {
  if (levels < 1 || levels > 52) {
    throw InvalidArgument("dyadic_t_grid: levels must be in [1, 52]");
  }
  std::vector<double> t;
  for (int j = 1; j <= levels; ++j) {
    t.push_back(1.0 - std::ldexp(1.0, -j));
  }
  return t;
}

CarlesonReport carleson_statistic(const MeasureSpec& mu, double s,
                                  std::span<const double> t_grid) {
  if (!(s > 0.0)) {
    throw InvalidArgument("carleson_statistic: requires s > 0");
  }
  mu.validate();
  CarlesonReport report;
  report.s = s;
  std::vector<double> xs;
  std::vector<double> ratios;
  for (double t : t_grid) {
    if (!(t >= 0.0 && t < 1.0)) {
      throw InvalidArgument("carleson_statistic: t must lie in [0, 1)");
    }
    const double ratio = mu.upper_mass(t) / std::pow(1.0 - t, s);
    report.grid.emplace_back(t, ratio);
    report.sup = std::max(report.sup, ratio);
    xs.push_back(1.0 / (1.0 - t));
    ratios.push_back(ratio);
  }
  const Classification c = classify(xs, ratios);
  report.slope = c.slope;
  report.verdict_bounded = c.bounded;
  report.verdict_compact = c.compact;
  return report;
}

nlohmann::json to_json(const TailEstimate& tail) {
  return {{"estimate", json_real(tail.estimate)},
          {"uncertainty", json_real(tail.uncertainty)},
          {"modelled", tail.modelled}};
}

nlohmann::json to_json(const CriterionReport& report) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& p : report.grid) {
    grid.push_back({{"N", p.n}, {"A_N", json_real(p.aggregate)},
                    {"S_N", json_real(p.statistic)}});
  }
  nlohmann::json doc{{"form", report.form},
                     {"regime", to_string(report.regime)},
                     {"alpha", report.alpha},
                     {"beta", report.beta},
                     {"grid", grid},
                     {"sup_S", json_real(report.sup_s)},
                     {"slope", json_real(report.slope)},
                     {"last_slope", json_real(report.last_slope)},
                     {"verdict_bounded", to_string(report.verdict_bounded)},
                     {"verdict_compact", to_string(report.verdict_compact)}};
  if (report.form == "tail") {
    doc["tail"] = to_json(report.tail);
  }
  return doc;
}

nlohmann::json to_json(const CarlesonReport& report) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& [t, ratio] : report.grid) {
    grid.push_back({{"t", t}, {"ratio", json_real(ratio)}});
  }
  return {{"s", report.s},
          {"grid", grid},
          {"sup", json_real(report.sup)},
          {"slope", json_real(report.slope)},
          {"verdict_bounded", to_string(report.verdict_bounded)},
          {"verdict_compact", to_string(report.verdict_compact)}};
}

std::string to_csv(const CriterionReport& report) {
  std::ostringstream out;
  if (report.form == "partial_sum") {
    out << "N,partial_sum,S_N\n";
  } else if (report.form == "shortcut") {
    out << "N,abs_eta_N,S_N\n";
  } else {
    out << "N,A_N,S_N\n";
  }
  for (const auto& p : report.grid) {
    out << p.n << ',' << format_double(p.aggregate) << ','
        << format_double(p.statistic) << '\n';
  }
  return out.str();
}

std::string to_csv(const CarlesonReport& report) {
  std::ostringstream out;
  out << "t,ratio\n";
  for (const auto& [t, ratio] : report.grid) {
    out << format_double(t) << ',' << format_double(ratio) << '\n';
  }
  return out.str();
}

}  // namespace rhaly
