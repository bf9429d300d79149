// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lcsvd/benchmark.hpp"
#include "lcsvd/error_metrics.hpp"
#include "lcsvd/factor.hpp"
#include "lcsvd/io.hpp"
#include "lcsvd/lcsvd.hpp"
#include "lcsvd/optimize.hpp"
#include "lcsvd/synth.hpp"
#include "oracles.hpp"

using namespace lcsvd;

namespace {

// Pinned tolerances and budgets.
constexpr double kRecoveryRrmse = 1e-8;  // percent
constexpr double kRecoverySeconds = 30.0;
constexpr double kSvdRelative = 1e-10;
constexpr double kIdentityPlanRelative = 1e-8;
constexpr long long kCompressionSlack = 1;
constexpr std::size_t kElbowTarget = 30, kElbowSlack = 5;
constexpr std::size_t kOsMaxIterations = 3;
constexpr double kOsEpsilon = 0.01;  // percent
constexpr double kSpeedupLcsvd = 10.0, kSpeedupOs = 2.0;
constexpr double kBenchmarkSeconds = 300.0;
constexpr double kRrmseExact = 1e-12;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome exact_recovery() {
  std::mt19937_64 gen(1001);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const auto j = static_cast<Eigen::Index>(100 + gen() % 901);
    const auto k = static_cast<Eigen::Index>(20 + gen() % 81);
    const auto r = static_cast<Eigen::Index>(1 + gen() % 10);
    const SnapshotMatrix v(oracle::low_rank(gen, j, k, r));
    const auto n_rows = static_cast<std::size_t>(r + static_cast<Eigen::Index>(gen() % 20));
    const auto n_cols = static_cast<std::size_t>(r + static_cast<Eigen::Index>(gen() % static_cast<std::uint64_t>(k - r + 1)));
    const auto plan = make_plan_random(static_cast<std::size_t>(j), static_cast<std::size_t>(k), n_rows, n_cols, gen());
    // The plan must keep rank r in the reduced matrix.
    const auto sv = oracle::jacobi_singular_values(apply_plan(v, plan).reduced);
    if (sv[static_cast<std::size_t>(r - 1)] < 1e-8 * sv[0]) return {false, fmt("case %d: plan lost rank", c)};
    const auto res = lcsvd_run(v, plan, ModeCountRule{static_cast<std::size_t>(r)});
    worst = std::max(worst, oracle::frobenius_ratio_percent(v.values(), res.reconstruction));
  }
  const double secs = since(t0);
  return {worst < kRecoveryRrmse && secs < kRecoverySeconds,
          fmt("50 cases, worst RRMSE %.3g%% (< %.0e), %.2f s (< %.0f s)", worst, kRecoveryRrmse, secs, kRecoverySeconds)};
}

Outcome svd_oracle() {
  std::mt19937_64 gen(1002);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const auto m = static_cast<Eigen::Index>(1 + gen() % 30), n = static_cast<Eigen::Index>(1 + gen() % 30);
    const auto a = oracle::gaussian(gen, m, n);
    const auto ref = oracle::jacobi_singular_values(a);
    const auto f = svd_truncated(a, ModeCountRule{ref.size()});
    if (f.n_retained() != ref.size()) return {false, fmt("case %d: kept %zu of %zu values", c, f.n_retained(), ref.size())};
    for (std::size_t i = 0; i < ref.size(); ++i)
      worst = std::max(worst, std::abs(f.singular_values(static_cast<Eigen::Index>(i)) - ref[i]) / ref[i]);
  }
  return {worst <= kSvdRelative, fmt("100 cases, worst relative deviation %.3g (<= %.0e)", worst, kSvdRelative)};
}

Outcome qr_oracle() {
  std::mt19937_64 gen(1003);
  for (int c = 0; c < 100; ++c) {
    const auto m = static_cast<Eigen::Index>(1 + gen() % 50), n = static_cast<Eigen::Index>(1 + gen() % 50);
    const auto a = oracle::gaussian(gen, m, n);
    const auto steps = static_cast<std::size_t>(std::min(m, n));
    const auto got = qr_pivoted(a).pivots;
    const auto ref = oracle::greedy_pivots(a, steps);
    if (!std::equal(ref.begin(), ref.end(), got.begin()))
      return {false, fmt("case %d (%ldx%ld): pivot sequences differ", c, static_cast<long>(m), static_cast<long>(n))};
  }
  return {true, "100 cases, all pivot sequences identical"};
}

Outcome identity_plan() {
  std::mt19937_64 gen(1004);
  double worst = 0.0;
  for (int c = 0; c < 20; ++c) {
    const auto j = static_cast<Eigen::Index>(20 + gen() % 200), k = static_cast<Eigen::Index>(5 + gen() % 60);
    const Eigen::MatrixXd v = oracle::gaussian(gen, j, k);
    const auto n = static_cast<std::size_t>(1 + gen() % static_cast<std::uint64_t>(std::min(j, k)));
    const auto f = svd_truncated(v, ModeCountRule{n});
    const Eigen::MatrixXd svd_rec = f.modes * f.singular_values.asDiagonal() * f.coefficients.transpose();
    const auto res = lcsvd_run(SnapshotMatrix(v), ReductionPlan::identity(static_cast<std::size_t>(j), static_cast<std::size_t>(k)),
                               ModeCountRule{n});
    worst = std::max(worst, (res.reconstruction - svd_rec).norm() / v.norm());
  }
  return {worst < kIdentityPlanRelative, fmt("20 cases, worst relative difference %.3g (< %.0e)", worst, kIdentityPlanRelative)};
}

Outcome sign_correction() {
  std::mt19937_64 gen(1005);
  for (int c = 0; c < 50; ++c) {
    const auto j = static_cast<Eigen::Index>(10 + gen() % 100), k = static_cast<Eigen::Index>(5 + gen() % 40);
    const Eigen::MatrixXd v = oracle::gaussian(gen, j, k);
    const auto n = static_cast<Eigen::Index>(1 + gen() % static_cast<std::uint64_t>(std::min(j, k)));
    const auto f = svd_truncated(v, ModeCountRule{static_cast<std::size_t>(n)});
    Eigen::VectorXd planted = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i)
      if (gen() % 2) planted(i) = -1.0;
    TruncatedFactorization flipped = f;
    flipped.coefficients = f.coefficients * planted.asDiagonal();
    const auto detected = sign_alignment(flipped.modes, v, flipped.coefficients);
    if (detected != planted) return {false, fmt("case %d: detected signs differ from the planted flips", c)};
    renormalize(flipped, v);
    if (flipped.coefficients != f.coefficients) return {false, fmt("case %d: coefficients not restored exactly", c)};
  }
  return {true, "50 cases, planted flips detected and undone exactly"};
}

Outcome compression() {
  const struct {
    std::size_t j, n;
    long long expected;
  } rows[] = {{1787025, 35, 51058}, {768000, 45, 17066}, {47850, 10, 4785},
              {6825, 10, 683},      {33411, 40, 835},    {33411, 40, 835}};
  std::string detail;
  bool ok = true;
  for (const auto& r : rows) {
    const auto c = compression_rate(r.j, r.n);
    ok = ok && std::llabs(c.rounded - r.expected) <= kCompressionSlack;
    detail += fmt("%lld/%lld ", c.rounded, r.expected);
  }
  return {ok, "computed/expected " + detail + fmt("(+-%lld)", kCompressionSlack)};
}

Outcome elbow() {
  const auto wake = flatten(gen_oscillatory_wake(SyntheticSpec{.kind = SyntheticKind::oscillatory_wake,
                                                               .n_x = 60, .n_y = 30, .k = 120, .rank = 6,
                                                               .noise_level = 0.01, .seed = 7}));
  std::vector<std::size_t> range;
  for (std::size_t s = 10; s <= 60; s += 5) range.push_back(s);
  const auto curves = elbow_curve(wake, range, 0.2, 10, 11);
  bool ok = true;
  std::string detail;
  for (const auto& c : curves) {
    const auto lo = kElbowTarget - kElbowSlack, hi = kElbowTarget + kElbowSlack;
    ok = ok && c.elbow >= lo && c.elbow <= hi;
    detail += fmt("component %zu elbow at %zu; ", c.component, c.elbow);
  }
  return {ok, detail + fmt("target %zu+-%zu", kElbowTarget, kElbowSlack)};
}

Outcome os_convergence() {
  std::size_t ok = 0, worst_iters = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto v = gen_exact_rank(SyntheticSpec{.j = 400, .k = 60, .rank = 5, .seed = 100 + seed});
    const auto out = os_lcsvd_optimize(v, OsLcsvdConfig{.n_sensors = 25, .mode_fraction = 0.2,
                                                        .tolerance_epsilon = kOsEpsilon,
                                                        .max_iterations = kOsMaxIterations, .seed = seed});
    worst_iters = std::max(worst_iters, out.iterations);
    ok += out.converged && out.iterations <= kOsMaxIterations;
  }
  return {ok == 20, fmt("%zu/20 seeds converged within %zu iterations (worst %zu)", ok, kOsMaxIterations, worst_iters)};
}

Outcome speedup() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto recs = run_benchmark(BenchmarkConfig{.dataset_id = "blayer-analog", .j = 47850, .k = 6170,
                                                  .n_points = {30}, .fractions = {0.5}, .runs = 1, .seed = 3});
  const double secs = since(t0);
  const auto& r = recs.front();
  if (r.skipped) return {false, r.note};
  const bool ok = r.s_u_lcsvd >= kSpeedupLcsvd && r.s_u_oslcsvd >= kSpeedupOs && secs < kBenchmarkSeconds;
  return {ok, fmt("S_u lcSVD %.1f (>= %.0f), OS-lcSVD %.1f (>= %.0f), t_svd %.1f s, total %.0f s (< %.0f s); "
                  "reference S_u 630.5 / 123.5",
                  r.s_u_lcsvd, kSpeedupLcsvd, r.s_u_oslcsvd, kSpeedupOs, r.t_svd, secs, kBenchmarkSeconds)};
}

Outcome rrmse_properties() {
  Eigen::MatrixXd a(2, 1), b(2, 1);
  a << 3, 4;
  b << 3, 1;
  const double hand = std::abs(rrmse(a, b) - 60.0);
  std::mt19937_64 gen(1010);
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const auto x = oracle::gaussian(gen, 30, 10), y = oracle::gaussian(gen, 30, 10);
    const double alpha = std::ldexp(std::uniform_real_distribution<double>(-1, 1)(gen), static_cast<int>(gen() % 40) - 20);
    if (alpha == 0.0) continue;
    const Eigen::MatrixXd sx = alpha * x, sy = alpha * y;
    const double base = rrmse(x, y);
    worst = std::max(worst, std::abs(rrmse(sx, sy) - base) / base);
  }
  return {hand <= kRrmseExact && worst <= kRrmseExact,
          fmt("|rrmse((3,4),(3,1)) - 60| = %.3g, worst relative scale drift %.3g (<= %.0e)", hand, worst, kRrmseExact)};
}

Outcome snt_roundtrip() {
  std::mt19937_64 gen(1011);
  const auto dir = std::filesystem::temp_directory_path() / "lcsvd_acceptance";
  std::filesystem::create_directories(dir);
  int three_d = 0, multi = 0;
  for (int c = 0; c < 20; ++c) {
    TensorShape s{.n_comp = 1 + gen() % 3, .n_x = 1 + gen() % 12, .n_y = 1 + gen() % 9,
                  .n_z = c % 2 ? std::optional<std::size_t>(2 + gen() % 5) : std::nullopt, .n_t = 1 + gen() % 7};
    three_d += s.is_3d();
    multi += s.n_comp > 1;
    Eigen::MatrixXd v = oracle::gaussian(gen, static_cast<Eigen::Index>(s.spatial_size()), static_cast<Eigen::Index>(s.n_t));
    for (Eigen::Index i = 0; i < v.size(); i += 7) v.data()[i] = std::ldexp(v.data()[i], static_cast<int>(gen() % 2000) - 1000);
    const SnapshotTensor t(s, v, c % 3 ? std::optional<double>(0.5 + c) : std::nullopt);
    const auto path = dir / fmt("t%d.snt", c);
    write_snt(path, t);
    const auto back = read_snt(path);
    const bool same = back.shape() == s && back.u_inf() == t.u_inf() &&
                      std::memcmp(back.values().data(), v.data(), sizeof(double) * static_cast<std::size_t>(v.size())) == 0;
    if (!same) return {false, fmt("tensor %d did not round-trip", c)};
  }
  return {true, fmt("20 tensors (%d 3-D, %d multi-component) bitwise identical", three_d, multi)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact recovery", exact_recovery},
      {"SVD vs Jacobi reference", svd_oracle},
      {"pivoted QR vs greedy reference", qr_oracle},
      {"lcSVD equals SVD under identity plan", identity_plan},
      {"sign correction", sign_correction},
      {"compression rate", compression},
      {"elbow on noisy wake", elbow},
      {"OS-lcSVD convergence", os_convergence},
      {"speed-up direction", speedup},
      {"RRMSE properties", rrmse_properties},
      {"SNT1 round trip", snt_roundtrip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
