#include "rhaly/etagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhaly/error.hpp"
#include "rhaly/special.hpp"

namespace rhaly {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^u + c) for c >= 0 without overflow at large u.
double log_exp_plus(double u, double c) {
  if (u > 0.0) {
    return u + std::log1p(c * std::exp(-u));
  }
  return std::log(std::exp(u) + c);
}

double log_sum_exp(std::span<const double> terms) {
  double top = kNegInf;
  for (double t : terms) {
    top = std::max(top, t);
  }
  if (top == kNegInf || !std::isfinite(top)) {
    return top;
  }
  double sum = 0.0;
  for (double t : terms) {
    sum += std::exp(t - top);
  }
  return top + std::log(sum);
}

}  // namespace

EtaSeq::EtaSeq(std::vector<Complex> values, std::string provenance,
               std::optional<TailModel> tail)
    : values_(std::move(values)),
      provenance_(std::move(provenance)),
      tail_(std::move(tail)) {
  if (values_.empty()) {
    throw InvalidArgument("EtaSeq: length must be at least 1");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidArgument("EtaSeq: entries must be finite");
    }
  }
}

EtaSeq EtaSeq::truncated(std::size_t length) const {
  if (length == 0 || length > values_.size()) {
    throw InvalidArgument("EtaSeq::truncated: length out of range");
  }
  return EtaSeq({values_.begin(), values_.begin() + static_cast<long>(length)},
                provenance_, tail_);
}

EtaSeq EtaSeq::scaled(Complex c) const {
  std::vector<Complex> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [c](Complex v) { return c * v; });
  std::optional<TailModel> tail;
  if (tail_) {
    const double shift = std::log(std::abs(c));
    tail = TailModel{[inner = tail_->log_abs_at_log_index, shift](double u) {
      return inner(u) + shift;
    }};
  }
  return EtaSeq(std::move(out), provenance_, std::move(tail));
}

void MeasureSpec::validate() const {
  for (const auto& atom : atoms) {
    if (!(atom.location >= 0.0 && atom.location < 1.0)) {
      throw InvalidArgument("MeasureSpec: atom location must lie in [0, 1)");
    }
    if (!(atom.mass > 0.0) || !std::isfinite(atom.mass)) {
      throw InvalidArgument("MeasureSpec: atom mass must be positive");
    }
  }
  if (density) {
    if (!(density->gamma > -1.0) || !std::isfinite(density->gamma)) {
      throw InvalidArgument(
          "MeasureSpec: density exponent gamma must be > -1");
    }
    if (!(density->scale >= 0.0) || !std::isfinite(density->scale)) {
      throw InvalidArgument("MeasureSpec: density scale must be >= 0");
    }
  }
  const double total = total_mass();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InvalidArgument("MeasureSpec: total mass must be finite and > 0");
  }
}

double MeasureSpec::total_mass() const { return upper_mass(0.0); }

double MeasureSpec::upper_mass(double t) const {
  double mass = 0.0;
  for (const auto& atom : atoms) {
    if (atom.location >= t) {
      mass += atom.mass;
    }
  }
  if (density && density->scale > 0.0) {
    const double g1 = density->gamma + 1.0;
    mass += density->scale * std::pow(1.0 - t, g1) / g1;
  }
  return mass;
}

MeasureSpec measure_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw InvalidArgument("measure: expected a JSON object");
  }
  MeasureSpec mu;
  try {
    if (doc.contains("atoms")) {
      for (const auto& a : doc.at("atoms")) {
        mu.atoms.push_back({a.at("t").get<double>(), a.at("mass").get<double>()});
      }
    }
    if (doc.contains("density") && !doc.at("density").is_null()) {
      const auto& d = doc.at("density");
      mu.density = Density{d.at("gamma").get<double>(),
                           d.at("scale").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("measure: ") + e.what());
  }
  mu.validate();
  return mu;
}

nlohmann::json to_json(const MeasureSpec& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms) {
    atoms.push_back({{"t", a.location}, {"mass", a.mass}});
  }
  nlohmann::json doc{{"atoms", atoms}};
  if (mu.density) {
    doc["density"] = {{"gamma", mu.density->gamma},
                      {"scale", mu.density->scale}};
  }
  return doc;
}

EtaSeq classical_cesaro(std::size_t max_index) {
  std::vector<Complex> eta(max_index + 1);
  for (std::size_t n = 0; n <= max_index; ++n) {
    eta[n] = 1.0 / (static_cast<double>(n) + 1.0);
  }
  TailModel tail{[](double u) { return -log_exp_plus(u, 1.0); }};
  return EtaSeq(std::move(eta), "classical-cesaro", std::move(tail));
}

EtaSeq power_log_family(double s, double r, std::size_t max_index) {
  if (!std::isfinite(s) || !std::isfinite(r)) {
    throw InvalidArgument("power_log_family: exponents must be finite");
  }
  std::vector<Complex> eta(max_index + 1);
  for (std::size_t n = 0; n <= max_index; ++n) {
    const double x = static_cast<double>(n);
    eta[n] = std::pow(x + 1.0, -s) * std::pow(std::log(x + 2.0), -r);
  }
  TailModel tail{[s, r](double u) {
    return -s * log_exp_plus(u, 1.0) - r * std::log(log_exp_plus(u, 2.0));
  }};
  return EtaSeq(std::move(eta), "power-log", std::move(tail));
}

EtaSeq measure_moments(const MeasureSpec& mu, std::size_t max_index) {
  mu.validate();
  std::vector<Complex> eta(max_index + 1);
  for (std::size_t n = 0; n <= max_index; ++n) {
    double value = 0.0;
    for (const auto& atom : mu.atoms) {
      value += atom.mass * std::pow(atom.location, static_cast<double>(n));
    }
    if (mu.density && mu.density->scale > 0.0) {
      value += mu.density->scale * special::beta_moment(n, mu.density->gamma);
    }
    eta[n] = value;
  }

  TailModel tail{[mu](double u) {
    std::vector<double> terms;
    terms.reserve(mu.atoms.size() + 1);
    const double x = std::exp(u);
    for (const auto& atom : mu.atoms) {
      terms.push_back(atom.location == 0.0
                          ? kNegInf
                          : std::log(atom.mass) + x * std::log(atom.location));
    }
    if (mu.density && mu.density->scale > 0.0) {
      const double a = mu.density->gamma + 1.0;
      // log Gamma(x + 1 + a) - log Gamma(x + 1); a * log x once x is huge.
      const double ratio =
          u < 36.0 ? special::log_gamma_ratio(x + 1.0, a) : a * u;
      terms.push_back(std::log(mu.density->scale) +
                      special::log_gamma(a) - ratio);
    }
    return log_sum_exp(terms);
  }};
  return EtaSeq(std::move(eta), "measure-moments", std::move(tail));
}

EtaSeq explicit_eta(std::vector<Complex> values) {
  return EtaSeq(std::move(values), "custom");
}

}  // namespace rhaly
