#include <doctest.h>

#include <random>

#include "lcsvd/error.hpp"
#include "lcsvd/error_metrics.hpp"
#include "lcsvd/optimize.hpp"
#include "lcsvd/rng.hpp"
#include "oracles.hpp"

using namespace lcsvd;

TEST_CASE("rrmse hand example and limits") {
  Eigen::MatrixXd a(2, 1), b(2, 1);
  a << 3, 4;
  b << 3, 1;
  CHECK(std::abs(rrmse(a, b) - 60.0) <= 1e-12);
  CHECK(rrmse(a, a) == 0.0);
  CHECK(rrmse(a, Eigen::MatrixXd::Zero(2, 1)) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK_THROWS(rrmse(Eigen::MatrixXd::Zero(2, 1), a));
  CHECK_THROWS(rrmse(a, Eigen::MatrixXd::Zero(3, 1)));
}

TEST_CASE("rrmse is scale invariant") {
  std::mt19937_64 gen(30);
  const auto a = oracle::gaussian(gen, 20, 7), b = oracle::gaussian(gen, 20, 7);
  for (double alpha : {-3.0, 1e-5, 2.5, 1e6}) {
    const Eigen::MatrixXd sa = alpha * a, sb = alpha * b;
    CHECK(std::abs(rrmse(sa, sb) - rrmse(a, b)) <= 1e-12 * rrmse(a, b));
  }
  CHECK(std::abs(rrmse(a, b) - oracle::frobenius_ratio_percent(a, b)) <= 1e-12 * rrmse(a, b));
}

TEST_CASE("bias and uncertainty agree with the two-pass reference") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> d(3.0, 0.5);
  std::vector<double> x(5000);
  for (auto& v : x) v = d(gen);
  const auto bu = bias_uncertainty(x);
  const auto ref = oracle::two_pass(x);
  CHECK(std::abs(bu.bias - ref.mean) <= 1e-12 * std::abs(ref.mean));
  CHECK(std::abs(bu.uncertainty - ref.stddev) <= 1e-12 * ref.stddev);
  const std::vector<double> c(100, 0.25);
  CHECK(bias_uncertainty(c).bias == 0.25);
  CHECK(bias_uncertainty(c).uncertainty == 0.0);
}

TEST_CASE("density curves") {
  Rng rng(32);
  std::vector<double> normal(100000), uniform(100000);
  for (auto& v : normal) v = rng.normal();
  for (auto& v : uniform) v = 2.0 * rng.uniform() - 1.0;

  const auto hn = density_curve(normal);
  CHECK(hn.densities.size() >= kMinBins);
  CHECK(hn.edges.size() == hn.densities.size() + 1);
  CHECK(std::abs(hn.integral() - 1.0) < 1e-6);

  // One bin holds ~2300 of 1e5 draws, so a single seed carries ~2% noise; average ten.
  const double peak = oracle::normal_pdf(0.0);
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng r(seed);
    std::vector<double> x(100000);
    for (auto& v : x) v = r.normal();
    const auto h = density_curve(x);
    for (std::size_t i = 0; i < h.densities.size(); ++i)
      if (h.edges[i] <= 0.0 && 0.0 < h.edges[i + 1]) {
        CHECK(std::abs(h.densities[i] - peak) < 0.1 * peak);
        sum += h.densities[i];
      }
  }
  CHECK(std::abs(sum / 10.0 - peak) < 0.05 * peak);

  const auto hu = density_curve(uniform);
  CHECK(std::abs(hu.integral() - 1.0) < 1e-6);
  for (std::size_t i = 1; i + 1 < hu.densities.size(); ++i) CHECK(std::abs(hu.densities[i] - 0.5) < 0.025);

  const auto hz = density_curve(std::vector<double>(50, 0.0));
  REQUIRE(hz.densities.size() == 1);
  CHECK(hz.edges[0] < 0.0);
  CHECK(hz.edges[1] > 0.0);
  CHECK(std::abs(hz.integral() - 1.0) < 1e-12);
  CHECK_THROWS_AS(density_curve(std::vector<double>{}), ValidationError);
}

TEST_CASE("compression rates of the reference datasets") {
  // (J, N_s, expected); the expected values mix rounding and truncation
  const struct {
    long long j, n, expected;
  } rows[] = {{1787025, 35, 51058}, {768000, 45, 17066}, {47850, 10, 4785},
              {6825, 10, 683},      {33411, 40, 835},    {33411, 40, 835}};
  for (const auto& r : rows) {
    const auto c = compression_rate(static_cast<std::size_t>(r.j), static_cast<std::size_t>(r.n));
    CHECK(c.rounded == oracle::compression_rate(r.j, r.n));
    CHECK(c.exact == doctest::Approx(static_cast<double>(r.j) / static_cast<double>(r.n)));
    CHECK(std::abs(c.rounded - r.expected) <= 1);
  }
}

TEST_CASE("error report") {
  TensorShape shape{.n_comp = 2, .n_x = 4, .n_y = 3, .n_z = std::nullopt, .n_t = 5};
  std::mt19937_64 gen(33);
  const auto v = oracle::gaussian(gen, 24, 5);
  const SnapshotTensor orig(shape, v, 2.0);

  const auto same = build_error_report(orig, orig, 6);
  CHECK(same.abs_error.values().maxCoeff() == 0.0);
  for (const auto& s : same.statistics) {
    CHECK(s.bias == 0.0);
    CHECK(s.uncertainty == 0.0);
  }
  CHECK(same.compression.exact == 4.0);

  Eigen::MatrixXd r = v;
  r(5, 3) += 1.0;  // component 0
  r(20, 1) -= 3.0; // component 1
  const SnapshotTensor rec(shape, r, 2.0);
  const auto rep = build_error_report(orig, rec, 6);
  CHECK(rep.normalized_by_u_inf());
  CHECK(rep.worst_snapshot == std::vector<std::size_t>{3, 1});
  CHECK((rep.abs_error.values().array() >= 0.0).all());
  const auto swapped = build_error_report(rec, orig, 6);
  CHECK((swapped.abs_error.values().array() == rep.abs_error.values().array()).all());
  for (const auto& h : rep.histograms) CHECK(std::abs(h.integral() - 1.0) < 1e-6);

  // normalized component-1 errors: +1.5 once among 60 samples
  std::vector<double> e1(60, 0.0);
  e1[0] = 1.5;
  const auto ref = oracle::two_pass(e1);
  CHECK(rep.statistics[1].bias == doctest::Approx(ref.mean).epsilon(1e-12));
  CHECK(rep.statistics[1].uncertainty == doctest::Approx(ref.stddev).epsilon(1e-12));
  CHECK(rep.rrmse_percent == doctest::Approx(oracle::frobenius_ratio_percent(v, r)).epsilon(1e-12));

  TensorShape other = shape;
  other.n_t = 4;
  CHECK_THROWS_AS(build_error_report(orig, SnapshotTensor(other, Eigen::MatrixXd(v.leftCols(4))), 6),
                  ValidationError);
}
