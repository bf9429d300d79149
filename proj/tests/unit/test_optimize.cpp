#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "lcsvd/error.hpp"
#include "lcsvd/optimize.hpp"
#include "lcsvd/synth.hpp"

using namespace lcsvd;

namespace {

SnapshotMatrix rank5(std::uint64_t seed = 50) { return gen_exact_rank(SyntheticSpec{.j = 400, .k = 60, .rank = 5, .seed = seed}); }

}  // namespace

TEST_CASE("modes_for") {
  CHECK(modes_for(25, 0.2) == 5);
  CHECK(modes_for(35, 0.2) == 7);
  CHECK(modes_for(4, 0.2) == 0);
  CHECK(modes_for(30, 0.5) == 15);
}

TEST_CASE("os-lcsvd converges on exact-rank data") {
  const auto v = rank5();
  const auto out = os_lcsvd_optimize(v, OsLcsvdConfig{.n_sensors = 25, .mode_fraction = 0.2, .tolerance_epsilon = 0.01, .seed = 1});
  CHECK(out.converged);
  CHECK(out.rrmse_percent < 1e-8);
  CHECK(out.sensors.p() == 25);
  CHECK(std::set<std::size_t>(out.sensors.indices.begin(), out.sensors.indices.end()).size() == 25);
  CHECK(out.history.size() == out.iterations);
  CHECK(rrmse(v.values(), out.result.reconstruction) == doctest::Approx(out.rrmse_percent));
}

TEST_CASE("vacuous tolerance converges on the first attempt") {
  const auto v = gen_noisy(SyntheticSpec{.kind = SyntheticKind::noisy_low_rank, .j = 300, .k = 40, .rank = 6, .noise_level = 0.3, .seed = 2});
  const auto out = os_lcsvd_optimize(v, OsLcsvdConfig{.n_sensors = 10, .tolerance_epsilon = 200.0, .seed = 3});
  CHECK(out.converged);
  CHECK(out.iterations == 1);
}

TEST_CASE("unreachable tolerance returns the best attempt unconverged") {
  const auto v = gen_noisy(SyntheticSpec{.kind = SyntheticKind::noisy_low_rank, .j = 300, .k = 40, .rank = 6, .noise_level = 0.3, .seed = 2});
  const auto out = os_lcsvd_optimize(v, OsLcsvdConfig{.n_sensors = 10, .tolerance_epsilon = 1e-6, .max_iterations = 4, .seed = 3});
  CHECK_FALSE(out.converged);
  CHECK(out.iterations == 4);
  CHECK(out.rrmse_percent == *std::min_element(out.history.begin(), out.history.end()));
}

TEST_CASE("os-lcsvd is deterministic per seed") {
  const auto v = gen_noisy(SyntheticSpec{.kind = SyntheticKind::noisy_low_rank, .j = 300, .k = 40, .rank = 6, .noise_level = 0.1, .seed = 4});
  const OsLcsvdConfig cfg{.n_sensors = 20, .tolerance_epsilon = 1e-3, .max_iterations = 3, .seed = 9};
  const auto a = os_lcsvd_optimize(v, cfg), b = os_lcsvd_optimize(v, cfg);
  CHECK(a.sensors.indices == b.sensors.indices);
  CHECK(a.history == b.history);
  CHECK((a.result.reconstruction.array() == b.result.reconstruction.array()).all());
}

TEST_CASE("os-lcsvd validation") {
  const auto v = rank5();
  CHECK_THROWS_AS(os_lcsvd_optimize(v, OsLcsvdConfig{.n_sensors = 4, .mode_fraction = 0.2}), ValidationError);
  CHECK_THROWS_AS(os_lcsvd_optimize(v, OsLcsvdConfig{.n_sensors = 401}), ValidationError);
}

TEST_CASE("stall rule on hand-made curves") {
  const std::vector<SearchPoint> curve{{10, 50.0}, {15, 20.0}, {20, 19.5}, {25, 19.4}};
  CHECK(stall_point(curve, 0.05) == std::pair<std::size_t, bool>{15, true});
  CHECK(stall_point(curve, std::numeric_limits<double>::infinity()).first == 10);
  const auto none = stall_point(std::vector<SearchPoint>{{10, 50.0}, {15, 20.0}, {20, 5.0}}, 0.05);
  CHECK(none.first == 20);
  CHECK_FALSE(none.second);
}

TEST_CASE("sensor-count search stalls at the rank on exact data") {
  const auto v = rank5();
  const auto res = find_optimal_sensor_count(
      v, SensorCountSearchConfig{.start = 10, .step = 5, .max_sensors = 40, .runs_per_count = 3, .seed = 5}, 0.2);
  CHECK(res.stalled);
  CHECK(res.n_opt == 25);
  for (const auto& p : res.curve)
    if (p.n_sensors >= 25) CHECK(p.mean_rrmse < kRrmseFloor);
  CHECK(res.epsilon == std::round(2.0 * res.curve[3].mean_rrmse) / 2.0);

  const auto immediate = find_optimal_sensor_count(
      v, SensorCountSearchConfig{.start = 10, .step = 5, .max_sensors = 40, .runs_per_count = 1,
                                 .stall_threshold = std::numeric_limits<double>::infinity(), .seed = 5}, 0.2);
  CHECK(immediate.n_opt == 10);
}

TEST_CASE("find_elbow picks the largest second difference") {
  const std::vector<ElbowPoint> pts{{10, 0, 10.0}, {15, 0, 9.0}, {20, 0, 2.0}, {25, 0, 1.5}, {30, 0, 1.4}};
  CHECK(find_elbow(pts) == 20);
  CHECK(find_elbow(std::vector<ElbowPoint>{{10, 0, 1.0}, {15, 0, 0.5}}) == 10);
}

TEST_CASE("elbow curve on exact data is zero once the rank is reached") {
  const auto t = gen_oscillatory_wake(SyntheticSpec{.kind = SyntheticKind::oscillatory_wake, .n_x = 30, .n_y = 15, .k = 40, .rank = 4, .seed = 6});
  const auto m = flatten(t);
  const std::vector<std::size_t> counts{10, 20, 25, 30};
  const auto curves = elbow_curve(m, counts, 0.2, 2, 7);
  REQUIRE(curves.size() == 2);
  for (const auto& c : curves) {
    REQUIRE(c.points.size() == 4);
    CHECK(c.points[2].uncertainty < 1e-8);  // 25 sensors keep 5 modes = full rank
    CHECK(c.points[0].uncertainty > c.points[2].uncertainty);
  }
  CHECK_THROWS_AS(elbow_curve(SnapshotMatrix(m.values()), counts, 0.2, 1, 7), ValidationError);
}
