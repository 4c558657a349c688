#include <doctest.h>

#include <cmath>
#include <limits>

#include "rhaly/criteria.hpp"
#include "rhaly/error.hpp"
#include "rhaly/normest.hpp"

using rhaly::DyadicGrid;
using rhaly::EtaSeq;
using rhaly::Verdict;

namespace {

constexpr std::size_t kNMax = std::size_t{1} << 20;

EtaSeq point_mass(double b, std::size_t n = kNMax) {
  return rhaly::measure_moments({{rhaly::Atom{b, 1.0}}, std::nullopt}, n);
}

// Reference log-log slope over the upper half of the samples.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t lo = x.size() / 2;
  double mx = 0, my = 0;
  const double k = static_cast<double>(x.size() - lo);
  for (std::size_t i = lo; i < x.size(); ++i) {
    mx += std::log(x[i]) / k;
    my += std::log(y[i]) / k;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = lo; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("dyadic grid") {
  const auto pts = DyadicGrid{4, 7}.points();
  CHECK(pts == std::vector<std::size_t>{16, 32, 64, 128});
  CHECK(DyadicGrid{}.points().size() == 13);
}

TEST_CASE("classify on exact power laws") {
  std::vector<double> x, flat, up, down, slow_down, zero_end, blowup;
  for (int k = 4; k <= 16; ++k) {
    const double n = std::ldexp(1.0, k);
    x.push_back(n);
    flat.push_back(3.0);
    up.push_back(std::pow(n, 0.1));
    down.push_back(std::pow(n, -0.05));
    slow_down.push_back(std::pow(n, -0.03));
    zero_end.push_back(k == 16 ? 0.0 : 1.0 / n);
    blowup.push_back(k == 16 ? std::numeric_limits<double>::infinity() : 1.0);
  }
  auto c = rhaly::classify(x, flat);
  CHECK(c.bounded == Verdict::holds);
  CHECK(c.compact == Verdict::fails);
  c = rhaly::classify(x, up);
  CHECK(c.slope == doctest::Approx(0.1));
  CHECK(c.bounded == Verdict::fails);
  CHECK(c.compact == Verdict::fails);
  c = rhaly::classify(x, down);
  CHECK(c.bounded == Verdict::holds);
  CHECK(c.compact == Verdict::holds);
  c = rhaly::classify(x, slow_down);
  CHECK(c.bounded == Verdict::holds);
  CHECK(c.compact == Verdict::inconclusive);
  c = rhaly::classify(x, zero_end);
  CHECK(c.compact == Verdict::holds);
  c = rhaly::classify(x, blowup);
  CHECK(c.bounded == Verdict::fails);

  std::vector<double> mid;
  for (double n : x) {
    mid.push_back(std::pow(n, 0.07));
  }
  CHECK(rhaly::classify(x, mid).bounded == Verdict::inconclusive);
}

TEST_CASE("tail_sum examples") {
  const EtaSeq e0 = rhaly::explicit_eta({1.0, 0.0, 0.0});
  CHECK(rhaly::tail_sum(e0, 0.3, 1).total() == 0.0);
  CHECK_THROWS_AS(rhaly::tail_sum(e0, 0.0, 0), rhaly::InvalidArgument);
  CHECK_THROWS_AS(rhaly::tail_sum(e0, 0.0, 4), rhaly::InvalidArgument);

  const EtaSeq c = rhaly::classical_cesaro(kNMax);
  const std::size_t n = 1024;
  const double a = rhaly::tail_sum(c, 0.0, n).truncated;
  CHECK(a == doctest::Approx(std::log(static_cast<double>(kNMax) / n)).epsilon(0.1));
  // and the modelled remainder knows this series diverges.
  CHECK(std::isinf(rhaly::tail_sum(c, 0.0, n).residual.estimate));

  const EtaSeq g = point_mass(0.9, 4096);
  const double a16 = rhaly::tail_sum(g, 1.0, 16).truncated;
  const double a32 = rhaly::tail_sum(g, 1.0, 32).truncated;
  CHECK(a32 / a16 == doctest::Approx(std::pow(0.9, 32)).epsilon(0.05));
  const double cst = a16 / std::pow(0.9, 32);
  for (std::size_t m : {48, 64, 100, 200}) {
    CHECK(rhaly::tail_sum(g, 1.0, m).truncated <= cst * std::pow(0.9, 2.0 * m) * (1 + 1e-12));
  }
}

TEST_CASE("tail_sum against direct long double summation") {
  const EtaSeq eta = rhaly::power_log_family(0.9, 0.5, 100000);
  for (double beta : {-1.0, 0.0, 0.7, 2.0}) {
    for (std::size_t n : {1, 10, 999, 65536}) {
      long double ref = 0.0L;
      for (std::size_t k = eta.max_index(); k >= n; --k) {
        ref += std::pow(static_cast<long double>(k), 1.0L - beta) * std::norm(eta[k]);
      }
      CHECK(rhaly::tail_sum(eta, beta, n).truncated ==
            doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
    }
  }
}

TEST_CASE("modelled remainders") {
  // sum_{n > M} n^(1-beta) (n+1)^-2s against the integral, s = 2, beta = 0.
  const EtaSeq sq = rhaly::power_log_family(2.0, 0.0, 1 << 16);
  const auto t = rhaly::tail_beyond(sq, 0.0);
  CHECK(t.modelled);
  long double ref = 0.0L;
  const long double cut = 2e6L;
  for (long double k = 65537.0L; k < cut; k += 1.0L) {
    ref += k / std::pow(k + 1.0L, 4.0L);
  }
  // int_{cut-1/2}^inf x (x+1)^-4 dx
  const long double a1 = cut + 0.5L;
  ref += 1.0L / (2.0L * a1 * a1) - 1.0L / (3.0L * a1 * a1 * a1);
  CHECK(t.estimate == doctest::Approx(static_cast<double>(ref)).epsilon(1e-4));
  CHECK(t.uncertainty < 0.01 * t.estimate);

  const auto none = rhaly::tail_beyond(rhaly::explicit_eta({1.0, 2.0}), 0.0);
  CHECK_FALSE(none.modelled);
  CHECK(none.estimate == 0.0);

  // beta = 0 with log factors: sum 1/(n log^2 n) converges, with tail about
  // 1/log(M), while sum 1/(n log n) diverges.
  const auto conv = rhaly::tail_beyond(rhaly::power_log_family(1.0, 1.0, 1024), 0.0);
  CHECK(conv.estimate == doctest::Approx(1.0 / std::log(1024.5)).epsilon(2e-3));
  CHECK(std::isinf(rhaly::tail_beyond(rhaly::power_log_family(1.0, 0.5, 1024), 0.0).estimate));
  CHECK(std::isfinite(rhaly::tail_beyond(rhaly::power_log_family(1.0, 1.0, 1024), 0.5).estimate));
}

TEST_CASE("criterion regimes on the classical operator") {
  const EtaSeq c = rhaly::classical_cesaro(kNMax);
  auto r = rhaly::criterion(c, 0.0, 0.0, DyadicGrid{4, 16});
  CHECK(r.regime == rhaly::Regime::alpha_zero);
  CHECK(r.verdict_bounded == Verdict::fails);
  CHECK(r.verdict_compact == Verdict::fails);

  r = rhaly::criterion(c, 1.0, 1.0, DyadicGrid{4, 16});
  CHECK(r.verdict_bounded == Verdict::holds);
  CHECK(r.verdict_compact == Verdict::fails);
  for (const auto& p : r.grid) {
    if (p.n >= 64) {
      CHECK(p.statistic == doctest::Approx(1.0).epsilon(0.05));
    }
  }

  r = rhaly::criterion(c, -1.0, -1.0, DyadicGrid{4, 16});
  CHECK(r.regime == rhaly::Regime::alpha_neg);
  CHECK(r.verdict_bounded == Verdict::fails);
  CHECK(r.verdict_compact == Verdict::fails);

  r = rhaly::criterion(rhaly::power_log_family(2.0, 0.0, kNMax), -1.0, -1.0, DyadicGrid{4, 16});
  CHECK(r.verdict_bounded == Verdict::holds);
  CHECK(r.verdict_compact == Verdict::holds);

  r = rhaly::criterion(point_mass(0.9), 1.0, 0.0, DyadicGrid{4, 16});
  CHECK(r.verdict_compact == Verdict::holds);
  CHECK(r.verdict_bounded == Verdict::holds);
}

TEST_CASE("criterion report invariants") {
  const std::vector<EtaSeq> seqs{rhaly::classical_cesaro(kNMax),
                                 rhaly::power_log_family(1.0, 1.0, kNMax),
                                 rhaly::power_log_family(0.6, 0.0, kNMax), point_mass(0.97)};
  for (const auto& eta : seqs) {
    for (double alpha : {-0.5, 0.0, 1.0}) {
      for (double beta : {-1.0, 1.0}) {
        const auto r = rhaly::criterion(eta, alpha, beta, DyadicGrid{});
        double sup = -1.0;
        std::vector<double> x, s;
        for (std::size_t i = 0; i < r.grid.size(); ++i) {
          CHECK(r.grid[i].aggregate >= 0.0);
          if (i > 0) {
            CHECK(r.grid[i].n > r.grid[i - 1].n);
            CHECK(r.grid[i].aggregate <= r.grid[i - 1].aggregate);
          }
          sup = std::max(sup, r.grid[i].statistic);
          x.push_back(static_cast<double>(r.grid[i].n));
          s.push_back(r.grid[i].statistic);
        }
        CHECK(r.sup_s == sup);
        if (std::isfinite(r.slope) && s.back() > 0.0) {
          CHECK(r.slope == doctest::Approx(ls_slope(x, s)).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("criterion preconditions") {
  const EtaSeq c = rhaly::classical_cesaro(1 << 12);
  CHECK_THROWS_AS(rhaly::criterion(c, 1.0, 1.0, DyadicGrid{4, 6}), rhaly::InvalidArgument);
  CHECK_THROWS_AS(rhaly::criterion(c, 1.0, 1.0, DyadicGrid{4, 9}), rhaly::InvalidArgument);
  CHECK_NOTHROW(rhaly::criterion(c, 1.0, 1.0, DyadicGrid{4, 8}));
  CHECK_THROWS_AS(rhaly::criterion(c, 0.0, 1.0, DyadicGrid{0, 8}), rhaly::InvalidArgument);
}

TEST_CASE("explicit eta is zero past its end") {
  std::vector<rhaly::Complex> v(1 << 12, 0.0);
  const auto r = rhaly::criterion(rhaly::explicit_eta(v), 0.0, 0.0, DyadicGrid{4, 8});
  CHECK(r.verdict_bounded == Verdict::holds);
  CHECK(r.verdict_compact == Verdict::holds);
  CHECK(r.sup_s == 0.0);
}

TEST_CASE("partial-sum form") {
  const auto r = rhaly::partial_sum_form(rhaly::classical_cesaro(kNMax), 1.0, 1.0, DyadicGrid{});
  CHECK(r.form == "partial_sum");
  CHECK(r.verdict_bounded == Verdict::holds);
  CHECK(r.grid.back().statistic == doctest::Approx(1.0).epsilon(1e-3));

  const auto z = rhaly::partial_sum_form(rhaly::explicit_eta(std::vector<rhaly::Complex>(
                                             {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
                                              0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0})),
                                         1.0, 0.0, DyadicGrid{1, 4});
  CHECK(z.sup_s == 0.0);
  CHECK(z.verdict_bounded == Verdict::holds);
  CHECK_THROWS_AS(rhaly::partial_sum_form(rhaly::classical_cesaro(100), 0.0, 0.0, DyadicGrid{1, 4}),
                  rhaly::InvalidArgument);
}

TEST_CASE("tail and partial-sum verdicts agree on power families") {
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    const EtaSeq eta = rhaly::power_log_family(s, 0.0, kNMax);
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (double beta : {0.0, 1.0}) {
        const auto a = rhaly::criterion(eta, alpha, beta, DyadicGrid{});
        const auto b = rhaly::partial_sum_form(eta, alpha, beta, DyadicGrid{});
        const auto c = rhaly::decreasing_shortcut(eta, alpha, beta, DyadicGrid{});
        INFO("s=" << s << " alpha=" << alpha << " beta=" << beta);
        CHECK(a.verdict_bounded == b.verdict_bounded);
        CHECK(a.verdict_compact == b.verdict_compact);
        CHECK(a.verdict_bounded == c.verdict_bounded);
        CHECK(a.verdict_compact == c.verdict_compact);
        CHECK(a.verdict_bounded != Verdict::inconclusive);
      }
    }
  }
}

TEST_CASE("decreasing shortcut") {
  const auto r = rhaly::decreasing_shortcut(rhaly::classical_cesaro(kNMax), 1.0, 1.0, DyadicGrid{});
  for (const auto& p : r.grid) {
    const double n = static_cast<double>(p.n);
    CHECK(p.statistic == doctest::Approx(n / (n + 1.0)).epsilon(1e-14));
  }
  CHECK(r.verdict_bounded == Verdict::holds);

  const auto pm = rhaly::decreasing_shortcut(point_mass(0.9), 1.0, 0.0, DyadicGrid{});
  CHECK(pm.verdict_bounded == Verdict::holds);
  CHECK(pm.verdict_compact == Verdict::holds);

  // beta = alpha + 2: constant statistic |eta_N|, bounded for bounded eta.
  const auto flat = rhaly::decreasing_shortcut(rhaly::power_log_family(0.0, 0.0, kNMax), 1.0, 3.0,
                                               DyadicGrid{});
  CHECK(flat.verdict_bounded == Verdict::holds);
  CHECK(flat.grid.back().statistic == 1.0);

  const EtaSeq bumpy = rhaly::explicit_eta({1.0, 0.5, 0.6, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1,
                                            0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1});
  CHECK_THROWS_AS(rhaly::decreasing_shortcut(bumpy, 1.0, 0.0, DyadicGrid{1, 4}),
                  rhaly::NonMonotoneError);
  CHECK_THROWS_AS(rhaly::decreasing_shortcut(rhaly::classical_cesaro(100), -1.0, 0.0,
                                             DyadicGrid{1, 4}),
                  rhaly::InvalidArgument);
}

TEST_CASE("Carleson statistic") {
  const auto t = rhaly::dyadic_t_grid(30);
  REQUIRE(t.size() == 30);
  CHECK(t.front() == 0.5);
  const auto leb = rhaly::carleson_statistic({{}, rhaly::Density{0.0, 1.0}}, 1.0, t);
  for (const auto& [tt, ratio] : leb.grid) {
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(leb.sup == doctest::Approx(1.0).epsilon(1e-12));

  const auto good = rhaly::carleson_statistic({{}, rhaly::Density{0.6, 1.0}}, 1.5, t);
  CHECK(good.verdict_bounded == Verdict::holds);
  const auto bad = rhaly::carleson_statistic({{}, rhaly::Density{0.4, 1.0}}, 1.5, t);
  CHECK(bad.verdict_bounded == Verdict::fails);
  for (const auto& [tt, ratio] : bad.grid) {
    CHECK(ratio == doctest::Approx(std::pow(1.0 - tt, -0.1) / 1.4).epsilon(1e-12));
  }

  const auto atom = rhaly::carleson_statistic({{rhaly::Atom{0.75, 2.0}}, std::nullopt}, 1.0, t);
  CHECK(atom.grid[0].second == doctest::Approx(4.0));  // t = 1/2 sees the atom
  CHECK(atom.grid[2].second == 0.0);                    // t = 7/8 does not
  CHECK_THROWS_AS(rhaly::carleson_statistic({{}, rhaly::Density{0.0, 1.0}}, 0.0, t),
                  rhaly::InvalidArgument);
}

TEST_CASE("Carleson and shortcut verdicts coincide on power densities") {
  const auto t = rhaly::dyadic_t_grid();
  const std::pair<double, double> ab[] = {{1.0, 0.0}, {0.5, 0.5}, {2.0, 1.0}};
  for (double g : {0.2, 0.5, 0.8}) {
    const rhaly::MeasureSpec mu{{}, rhaly::Density{g, 1.0}};
    const EtaSeq eta = rhaly::measure_moments(mu, kNMax);
    for (const auto& [alpha, beta] : ab) {
      const double s = 1.0 + (alpha - beta) / 2.0;
      const auto car = rhaly::carleson_statistic(mu, s, t);
      const auto sc = rhaly::decreasing_shortcut(eta, alpha, beta, DyadicGrid{});
      INFO("gamma=" << g << " alpha=" << alpha << " beta=" << beta);
      CHECK(car.verdict_bounded == sc.verdict_bounded);
      CHECK(car.verdict_compact == sc.verdict_compact);
    }
  }
}

TEST_CASE("verdicts shadow section-norm growth") {
  // bounded: classical with alpha = beta = 1
  auto c = rhaly::classical_cesaro(kNMax);
  CHECK(rhaly::criterion(c, 1.0, 1.0, DyadicGrid{}).verdict_bounded == Verdict::holds);
  const double s11 = rhaly::section_norm(rhaly::section(c, 1.0, 1.0, 2048)).value;
  const double s12 = rhaly::section_norm(rhaly::section(c, 1.0, 1.0, 4096)).value;
  CHECK(std::abs(s12 - s11) < 0.1 * s11);
  // unbounded at a power rate: classical on S^2
  CHECK(rhaly::criterion(c, -1.0, -1.0, DyadicGrid{}).verdict_bounded == Verdict::fails);
  const double u11 = rhaly::section_norm(rhaly::section(c, -1.0, -1.0, 2048)).value;
  const double u12 = rhaly::section_norm(rhaly::section(c, -1.0, -1.0, 4096)).value;
  CHECK(u12 > 1.1 * u11);
}

TEST_CASE("JSON and CSV serialization") {
  const auto r = rhaly::criterion(rhaly::classical_cesaro(kNMax), 0.0, 0.0, DyadicGrid{4, 7});
  const auto doc = rhaly::to_json(r);
  CHECK(doc["verdict_bounded"] == "fails");
  CHECK(doc["grid"].size() == 4);
  CHECK(doc["tail"]["estimate"] == "inf");
  const std::string csv = rhaly::to_csv(r);
  CHECK(csv.rfind("N,A_N,S_N\n16,", 0) == 0);
  CHECK(rhaly::verdict_from_string("holds") == Verdict::holds);
  CHECK_THROWS_AS(rhaly::verdict_from_string("maybe"), rhaly::InvalidArgument);
}
