#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rhaly/coeffspace.hpp"
#include "rhaly/criteria.hpp"
#include "rhaly/etagen.hpp"
#include "rhaly/normest.hpp"

namespace rhaly {

enum class CertificateKind { lower_bound, schur_upper, bennett };

std::string_view to_string(CertificateKind kind);

struct Certificate {
  CertificateKind kind = CertificateKind::lower_bound;
  double value = 0.0;
  std::map<std::string, double> parameters;
  std::optional<CoeffSeq> witness;
};

nlohmann::json to_json(const Certificate& cert);

/// h_b(z) = (log 1/(1-b))^(-1/2) log 1/(1-bz), coefficients 1..N; 1/2 < b < 1.
CoeffSeq h_b(double b, std::size_t n);

/// g_{b,alpha}(z) = (1-b)^(alpha/2) sum_{n>=1} n^(alpha-1) b^n z^n; alpha > 0.
CoeffSeq g_b_alpha(double b, double alpha, std::size_t n);

/// ceil(16 / (1 - b)), so that b^N < e^-16.
std::size_t default_truncation(double b);

/// b_j = 1 - 2^-j for j = 1..levels.
std::vector<double> b_grid(int levels = 14);

struct LowerBoundOptions {
  /// Check the certificate against the power-iteration norm of the section
  /// of the same order and record it under "section_norm".
  bool verify = true;
  PowerIterationOptions power{};
};

/*!
  value = ||C_(eta) f||_{D^2_beta} / ||f||_{D^2_alpha}, with C_(eta) f
  truncated at eta.max_index(); a lower bound for the operator norm with f as
  witness. Throws InvalidArgument for f = 0 (in D^2_alpha) or f longer than
  eta, and NumericalError if verification finds value above the section norm.
*/
Certificate lower_bound(const EtaSeq& eta, SpaceParams alpha, SpaceParams beta,
                        const CoeffSeq& f, const LowerBoundOptions& options = {});

/// Nonnegative kernel entry alpha_{j,m}, indices starting at 1.
using KernelFn = std::function<double(std::size_t, std::size_t)>;

/*!
  Schur test on the N x N truncation (indices 1..N) with weights p_j =
  weights[j-1]:

    c1 = max_m sum_j K(j,m) p_j / p_m,   c2 = max_j sum_m K(j,m) p_m / p_j,

  value = sqrt(c1 c2) bounds |sum K(j,m) z_j w_m| / (||z|| ||w||).
*/
Certificate schur_certify(const KernelFn& kernel, std::span<const double> weights,
                          std::size_t n);

/// 1 / (sqrt(jm) log(j + m + 1)): the log-kernel on D^2_{0,0} after the
/// substitution z_j = sqrt(j) |a_j|.
double log_kernel(std::size_t j, std::size_t m);
/// p_j = j^(-1/2) (1 + log j)^(-1/2), j = 1..n.
std::vector<double> log_kernel_weights(std::size_t n);
/// 1 / (j + m).
double hilbert_kernel(std::size_t j, std::size_t m);

/*!
  Bennett transference check. With prefix sums V_n = sum_{k<=n} v_k:

    hypothesis ratio  H(N) = sum_{n<=N} u_n V_n^2 / sum_{n<=N} v_n
    conclusion ratio  C(N) = sum_{n<=N} u_n (sum_{k<=n} v_k w_k)^2
                             / sum_{n<=N} v_n w_n^2

  Sequences are 1-indexed (entry 0 holds index 1). value = max C over the
  grid; "passes" is 1 unless H classifies as bounded while C does not.
*/
Certificate bennett_check(std::span<const double> u, std::span<const double> v,
                          std::span<const double> w, const DyadicGrid& grid);

/// bennett_check on the sequences bounding ||C_(eta) f||^2 for
/// f = sum a_k z^k: u_k = k^(1-beta) |eta_k|^2, v_k = k^(alpha-1) and
/// w_k = |a_k| / k^(alpha-1), k = 1..2^max_exp. abs_a[k-1] holds |a_k|.
Certificate bennett_uvw(const EtaSeq& eta, double alpha, double beta,
                        std::span<const double> abs_a, const DyadicGrid& grid);

}  // namespace rhaly
