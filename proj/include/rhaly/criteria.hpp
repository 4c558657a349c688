#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rhaly/etagen.hpp"

namespace rhaly {

enum class Regime { alpha_neg, alpha_zero, alpha_pos };
enum class Verdict { holds, fails, inconclusive };

std::string_view to_string(Regime regime);
std::string_view to_string(Verdict verdict);
Verdict verdict_from_string(std::string_view text);

/// N = 2^min_exp, ..., 2^max_exp.
struct DyadicGrid {
  int min_exp = 4;
  int max_exp = 16;

  std::vector<std::size_t> points() const;
};

// Slope thresholds of the log-log classification. Comparisons allow
// kSlopeEpsilon of rounding slack so that exact power laws sitting on a
// threshold classify deterministically.
inline constexpr double kBoundedHoldsSlope = 0.05;
inline constexpr double kBoundedFailsSlope = 0.1;
inline constexpr double kCompactHoldsSlope = -0.05;
inline constexpr double kCompactFailsSlope = -0.025;
inline constexpr double kSlopeEpsilon = 1e-9;
/// Verdicts need the tail-extrapolation uncertainty below this fraction of
/// A_N at the largest grid point.
inline constexpr double kTailUncertaintyFraction = 0.01;

struct Classification {
  double slope = 0.0;       ///< least-squares slope over the upper half
  double last_slope = 0.0;  ///< slope of the final segment
  Verdict bounded = Verdict::inconclusive;
  Verdict compact = Verdict::inconclusive;
};

/*!
  Classifies a statistic S sampled at increasing abscissae x by the slope of
  log S against log x over the upper half of the samples.

  bounded: holds if slope <= 0.05; fails if both the slope and the final
  segment slope are >= 0.1; otherwise inconclusive.
  compact: holds if slope <= -0.05; fails if bounded fails or slope > -0.025;
  otherwise inconclusive.

  A statistic that reaches exactly 0 at the last sample has slope -inf; any
  non-finite sample gives slope +inf.
*/
Classification classify(std::span<const double> x, std::span<const double> s);

/// Sum of n^(1-beta) |eta_n|^2 beyond the stored entries, from the
/// sequence's TailModel. Without a model the sequence is taken to vanish past
/// its last entry and the estimate is 0.
struct TailEstimate {
  double estimate = 0.0;     ///< +inf when the series diverges
  double uncertainty = 0.0;  ///< bound on |true tail - estimate|
  bool modelled = false;
};

TailEstimate tail_beyond(const EtaSeq& eta, double beta);

struct TailSum {
  double truncated = 0.0;  ///< sum_{n=N}^{N_max} n^(1-beta) |eta_n|^2
  TailEstimate residual;   ///< beyond N_max
  double total() const { return truncated + residual.estimate; }
};

/// A_N truncated at eta.max_index(), summed from the large-n end with
/// compensation; requires 1 <= N <= eta.size().
TailSum tail_sum(const EtaSeq& eta, double beta, std::size_t n);

struct GridPoint {
  std::size_t n = 0;
  double aggregate = 0.0;  ///< A_N, the partial sum, or |eta_N|
  double statistic = 0.0;  ///< S_N
};

struct CriterionReport {
  std::string form;  ///< "tail", "partial_sum" or "shortcut"
  Regime regime = Regime::alpha_pos;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<GridPoint> grid;
  double sup_s = 0.0;
  double slope = 0.0;
  double last_slope = 0.0;
  Verdict verdict_bounded = Verdict::inconclusive;
  Verdict verdict_compact = Verdict::inconclusive;
  TailEstimate tail;  ///< only meaningful for the tail form
};

/*!
  Tail-sum criterion. A_N = sum_{n >= N} n^(1-beta) |eta_n|^2 (stored part
  plus the modelled remainder) and S_N = A_N phi(N) with phi = 1, log N or
  N^alpha for alpha < 0, = 0, > 0.

  For alpha < 0 bounded and compact coincide and hold exactly when A_N is
  finite. Otherwise the verdicts come from classify(), and both are
  inconclusive when the remainder uncertainty is not below 1% of A_N at the
  top grid point.

  Requires at least 4 grid points and 2^max_exp <= eta.size() / 16.
*/
CriterionReport criterion(const EtaSeq& eta, double alpha, double beta,
                          const DyadicGrid& grid);

/// S'_N = N^-alpha sum_{n=1}^N n^(1+2 alpha-beta) |eta_n|^2; alpha > 0.
CriterionReport partial_sum_form(const EtaSeq& eta, double alpha, double beta,
                                 const DyadicGrid& grid);

/// S''_N = |eta_N| N^(1+(alpha-beta)/2) if beta < alpha + 2, |eta_N|
/// otherwise. Requires alpha > 0 and |eta_n| non-increasing (NonMonotoneError).
CriterionReport decreasing_shortcut(const EtaSeq& eta, double alpha,
                                    double beta, const DyadicGrid& grid);

struct CarlesonReport {
  double s = 0.0;
  std::vector<std::pair<double, double>> grid;  ///< (t, mu([t,1)) / (1-t)^s)
  double sup = 0.0;
  double slope = 0.0;  ///< against log(1 / (1 - t))
  Verdict verdict_bounded = Verdict::inconclusive;
  Verdict verdict_compact = Verdict::inconclusive;
};

/// t_j = 1 - 2^-j, j = 1..levels.
std::vector<double> dyadic_t_grid(int levels = 30);

CarlesonReport carleson_statistic(const MeasureSpec& mu, double s,
                                  std::span<const double> t_grid);

nlohmann::json to_json(const TailEstimate& tail);
nlohmann::json to_json(const CriterionReport& report);
nlohmann::json to_json(const CarlesonReport& report);
/// Header "N,A_N,S_N" for the tail form; the other forms name the middle
/// column after their aggregate.
std::string to_csv(const CriterionReport& report);
std::string to_csv(const CarlesonReport& report);

}  // namespace rhaly
