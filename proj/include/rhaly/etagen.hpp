#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhaly/coeffspace.hpp"

namespace rhaly {

/// Analytic continuation of |eta_n| past the stored entries, used to estimate
/// tail sums beyond N_max. The callable maps u = log(x) to log|eta(x)| so that
/// indices far beyond double range (x = e^u, u up to ~1e8) stay representable.
struct TailModel {
  std::function<double(double)> log_abs_at_log_index;
};

/// Multiplier sequence eta_0..eta_{N_max} defining C_(eta).
class EtaSeq {
 public:
  EtaSeq(std::vector<Complex> values, std::string provenance,
         std::optional<TailModel> tail = std::nullopt);

  std::size_t size() const { return values_.size(); }
  std::size_t max_index() const { return values_.size() - 1; }
  const Complex& operator[](std::size_t n) const { return values_[n]; }
  std::span<const Complex> values() const { return values_; }
  const std::string& provenance() const { return provenance_; }
  const std::optional<TailModel>& tail_model() const { return tail_; }

  /// First `length` entries; the tail model (if any) is kept.
  EtaSeq truncated(std::size_t length) const;
  /// c * eta, with the tail model shifted by log|c|.
  EtaSeq scaled(Complex c) const;

 private:
  std::vector<Complex> values_;
  std::string provenance_;
  std::optional<TailModel> tail_;
};

struct Atom {
  double location;  // t in [0, 1)
  double mass;      // > 0
};

/// c (1 - t)^gamma dt on [0, 1).
struct Density {
  double gamma;
  double scale;
};

/// Finite positive radial measure on [0, 1): point masses plus an optional
/// power density.
struct MeasureSpec {
  std::vector<Atom> atoms;
  std::optional<Density> density;

  /// Throws InvalidArgument unless every invariant holds.
  void validate() const;
  double total_mass() const;
  /// mu([t, 1)), exact.
  double upper_mass(double t) const;
};

MeasureSpec measure_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const MeasureSpec& mu);

/// eta_n = 1 / (n + 1).
EtaSeq classical_cesaro(std::size_t max_index);

/// eta_n = sum_atoms mass t^n + c B(n + 1, gamma + 1).
EtaSeq measure_moments(const MeasureSpec& mu, std::size_t max_index);

/// eta_n = (n + 1)^-s (log(n + 2))^-r.
EtaSeq power_log_family(double s, double r, std::size_t max_index);

/// User-supplied values; no tail model, so the sequence is treated as zero
/// past its last entry.
EtaSeq explicit_eta(std::vector<Complex> values);

}  // namespace rhaly
