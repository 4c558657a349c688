#include "rhaly/testfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rhaly/cesaro_op.hpp"
#include "rhaly/compensated.hpp"
#include "rhaly/error.hpp"
#include "rhaly/format.hpp"

namespace rhaly {
namespace {

void require_b(double b, const char* who) {
  if (!(b > 0.5 && b < 1.0)) {
    throw InvalidArgument(std::string(who) + ": b must lie in (1/2, 1)");
  }
}

double verdict_code(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return 1.0;
    case Verdict::fails:
      return 0.0;
    case Verdict::inconclusive:
      break;
  }
  return -1.0;
}

}  // namespace

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::lower_bound:
      return "lower_bound";
    case CertificateKind::schur_upper:
      return "schur_upper";
    case CertificateKind::bennett:
      return "bennett";
  }
  return "unknown";
}

nlohmann::json to_json(const Certificate& cert) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [name, value] : cert.parameters) {
    params[name] = json_real(value);
  }
  return {{"kind", to_string(cert.kind)}, {"value", json_real(cert.value)}, {"parameters", params}};
}

CoeffSeq h_b(double b, std::size_t n) {
  require_b(b, "h_b");
  if (n < 1) {
    throw InvalidArgument("h_b: need N >= 1");
  }
  const double scale = 1.0 / std::sqrt(-std::log1p(-b));
  std::vector<Complex> a(n + 1);
  const double log_b = std::log(b);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto x = static_cast<double>(k);
    a[k] = scale * std::exp(x * log_b) / x;
  }
  return CoeffSeq(std::move(a));
}

CoeffSeq g_b_alpha(double b, double alpha, std::size_t n) {
  require_b(b, "g_b_alpha");
  if (!(alpha > 0.0)) {
    throw InvalidArgument("g_b_alpha: alpha must be > 0");
  }
  if (n < 1) {
    throw InvalidArgument("g_b_alpha: need N >= 1");
  }
  const double scale = std::pow(1.0 - b, 0.5 * alpha);
  const double log_b = std::log(b);
  std::vector<Complex> a(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto x = static_cast<double>(k);
    a[k] = scale * std::exp((alpha - 1.0) * std::log(x) + x * log_b);
  }
  return CoeffSeq(std::move(a));
}

std::size_t default_truncation(double b) {
  if (!(b >= 0.0 && b < 1.0)) {
    throw InvalidArgument("default_truncation: b must lie in [0, 1)");
  }
  return static_cast<std::size_t>(std::ceil(16.0 / (1.0 - b)));
}

std::vector<double> b_grid(int levels) {
  if (levels < 1 || levels > 52) {
    throw InvalidArgument("b_grid: levels must be in [1, 52]");
  }
  std::vector<double> out;
  for (int j = 1; j <= levels; ++j) {
    out.push_back(1.0 - std::ldexp(1.0, -j));
  }
  return out;
}

Certificate lower_bound(const EtaSeq& eta, SpaceParams alpha, SpaceParams beta,
                        const CoeffSeq& f, const LowerBoundOptions& options) {
  const double input = norm_sq(f, alpha);
  if (!(input > 0.0)) {
    throw InvalidArgument("lower_bound: f must be nonzero");
  }
  const CoeffSeq image = apply(eta, f);
  Certificate cert;
  cert.kind = CertificateKind::lower_bound;
  cert.value = std::sqrt(norm_sq(image, beta) / input);
  cert.parameters = {{"alpha", alpha.alpha},
                     {"beta", beta.alpha},
                     {"N", static_cast<double>(eta.max_index())},
                     {"input_norm_sq", input}};
  if (options.verify) {
    const NormEstimate est =
        section_norm(section(eta, alpha, beta, eta.max_index()), options.power);
    cert.parameters["section_norm"] = est.value;
    cert.parameters["section_converged"] = est.converged ? 1.0 : 0.0;
    if (est.converged && cert.value > est.value * (1.0 + 1e-8) + 1e-300) {
      throw NumericalError("lower_bound: certificate " + std::to_string(cert.value) +
                           " exceeds section norm " + std::to_string(est.value));
    }
  }
  cert.witness = f;
  return cert;
}

Certificate schur_certify(const KernelFn& kernel, std::span<const double> weights,
                          std::size_t n) {
  if (n < 1 || weights.size() < n) {
    throw InvalidArgument("schur_certify: need N >= 1 and N weights");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
      throw InvalidArgument("schur_certify: weights must be positive");
    }
  }
  std::vector<CompensatedSum<double>> column(n);  // sum_j K(j,m) p_j
  std::vector<CompensatedSum<double>> row(n);     // sum_m K(j,m) p_m
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t m = 1; m <= n; ++m) {
      const double k = kernel(j, m);
      if (!(k >= 0.0) || !std::isfinite(k)) {
        throw InvalidArgument("schur_certify: kernel entries must be nonnegative");
      }
      column[m - 1] += k * weights[j - 1];
      row[j - 1] += k * weights[m - 1];
    }
  }
  double c1 = 0.0;
  double c2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c1 = std::max(c1, column[i].value() / weights[i]);
    c2 = std::max(c2, row[i].value() / weights[i]);
  }
  Certificate cert;
  cert.kind = CertificateKind::schur_upper;
  cert.value = std::sqrt(c1 * c2);
  cert.parameters = {{"c1", c1}, {"c2", c2}, {"N", static_cast<double>(n)}};
  return cert;
}

double log_kernel(std::size_t j, std::size_t m) {
  const auto x = static_cast<double>(j);
  const auto y = static_cast<double>(m);
  return 1.0 / (std::sqrt(x * y) * std::log(x + y + 1.0));
}

std::vector<double> log_kernel_weights(std::size_t n) {
  std::vector<double> p(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const auto x = static_cast<double>(j);
    p[j - 1] = 1.0 / std::sqrt(x * (1.0 + std::log(x)));
  }
  return p;
}

double hilbert_kernel(std::size_t j, std::size_t m) {
  return 1.0 / static_cast<double>(j + m);
}

Certificate bennett_check(std::span<const double> u, std::span<const double> v,
                          std::span<const double> w, const DyadicGrid& grid) {
  const auto points = grid.points();
  if (points.empty()) {
    throw InvalidArgument("bennett_check: empty grid");
  }
  const std::size_t n_max = points.back();
  if (u.size() < n_max || v.size() < n_max || w.size() < n_max) {
    throw InvalidArgument("bennett_check: sequences shorter than the grid");
  }
  for (std::size_t i = 0; i < n_max; ++i) {
    if (!(u[i] > 0.0 && v[i] > 0.0 && w[i] > 0.0)) {
      throw InvalidArgument("bennett_check: entries must be positive (index " +
                            std::to_string(i + 1) + ")");
    }
  }
  CompensatedSum<double> v_prefix;
  CompensatedSum<double> vw_prefix;
  CompensatedSum<double> lhs1;
  CompensatedSum<double> lhs2;
  CompensatedSum<double> rhs2;
  std::vector<double> xs;
  std::vector<double> hyp;
  std::vector<double> conc;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::size_t i = n - 1;
    v_prefix += v[i];
    vw_prefix += v[i] * w[i];
    const double big_v = v_prefix.value();
    const double big_vw = vw_prefix.value();
    lhs1 += u[i] * big_v * big_v;
    lhs2 += u[i] * big_vw * big_vw;
    rhs2 += v[i] * w[i] * w[i];
    if (next < points.size() && n == points[next]) {
      xs.push_back(static_cast<double>(n));
      hyp.push_back(lhs1.value() / big_v);
      conc.push_back(lhs2.value() / rhs2.value());
      ++next;
    }
  }
  const Classification h = classify(xs, hyp);
  const Classification c = classify(xs, conc);
  const bool passes = !(h.bounded == Verdict::holds && c.bounded != Verdict::holds);

  Certificate cert;
  cert.kind = CertificateKind::bennett;
  cert.value = *std::max_element(conc.begin(), conc.end());
  cert.parameters = {{"hypothesis_ratio_max", *std::max_element(hyp.begin(), hyp.end())},
                     {"hypothesis_slope", h.slope},
                     {"conclusion_slope", c.slope},
                     {"hypothesis_bounded", verdict_code(h.bounded)},
                     {"conclusion_bounded", verdict_code(c.bounded)},
                     {"passes", passes ? 1.0 : 0.0},
                     {"N_max", static_cast<double>(n_max)}};
  return cert;
}

Certificate bennett_uvw(const EtaSeq& eta, double alpha, double beta,
                        std::span<const double> abs_a, const DyadicGrid& grid) {
  const auto points = grid.points();
  if (points.empty() || points.back() > eta.max_index() ||
      points.back() > abs_a.size()) {
    throw InvalidArgument("bennett_uvw: eta or coefficients shorter than the grid");
  }
  const std::size_t n_max = points.back();
  std::vector<double> u(n_max);
  std::vector<double> v(n_max);
  std::vector<double> w(n_max);
  for (std::size_t k = 1; k <= n_max; ++k) {
    const double kd = static_cast<double>(k);
    u[k - 1] = std::pow(kd, 1.0 - beta) * std::norm(eta[k]);
    v[k - 1] = std::pow(kd, alpha - 1.0);
    w[k - 1] = abs_a[k - 1] / v[k - 1];
  }
  return bennett_check(u, v, w, grid);
}

}  // namespace rhaly
