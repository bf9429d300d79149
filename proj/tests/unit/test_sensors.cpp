#include <doctest.h>

#include <random>
#include <set>

#include "lcsvd/error.hpp"
#include "lcsvd/sensors.hpp"
#include "lcsvd/synth.hpp"
#include "oracles.hpp"

using namespace lcsvd;

namespace {

Eigen::MatrixXd random_orthonormal(std::mt19937_64& gen, Eigen::Index j, Eigen::Index n) {
  return Eigen::HouseholderQR<Eigen::MatrixXd>(oracle::gaussian(gen, j, n)).householderQ() *
         Eigen::MatrixXd::Identity(j, n);
}

}  // namespace

TEST_CASE("canonical basis selects its own rows") {
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(10, 4);
  CHECK(place_sensors(w, 4).indices == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("sensors follow greedy selection on the transposed basis") {
  std::mt19937_64 gen(20);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = random_orthonormal(gen, 6, 2);
    CHECK(place_sensors(w, 2).indices == oracle::greedy_pivots(w.transpose(), 2));
  }
}

TEST_CASE("placement is sign invariant and well conditioned") {
  std::mt19937_64 gen(21);
  const auto w = random_orthonormal(gen, 200, 8);
  Eigen::MatrixXd flipped = w;
  flipped.col(1) *= -1.0;
  flipped.col(5) *= -1.0;
  const auto a = place_sensors(w, 8), b = place_sensors(flipped, 8);
  CHECK(a.indices == b.indices);
  CHECK(place_sensors(w, 8).indices == a.indices);
  Eigen::MatrixXd wc(8, 8);
  for (int i = 0; i < 8; ++i) wc.row(i) = w.row(static_cast<Eigen::Index>(a.indices[static_cast<std::size_t>(i)]));
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXd>(wc).singularValues().minCoeff() > 1e-8);
}

TEST_CASE("oversampled placement gives unique in-range sensors") {
  std::mt19937_64 gen(22);
  const auto w = random_orthonormal(gen, 100, 5);
  const auto s = place_sensors(w, 23);
  CHECK(s.p() == 23);
  CHECK(std::set<std::size_t>(s.indices.begin(), s.indices.end()).size() == 23);
  for (auto i : s.indices) CHECK(i < 100);
  // the first N follow the undersampled selection
  const auto base = place_sensors(w, 5);
  CHECK(std::vector<std::size_t>(s.indices.begin(), s.indices.begin() + 5) == base.indices);
}

TEST_CASE("sensor count validation names J") {
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(10, 2);
  CHECK_THROWS_WITH_AS(place_sensors(w, 11), doctest::Contains("J = 10"), ValidationError);
  CHECK_THROWS_AS(place_sensors(w, 0), ValidationError);
}

TEST_CASE("measure picks rows") {
  std::mt19937_64 gen(23);
  const SnapshotMatrix v(oracle::gaussian(gen, 10, 4));
  SensorSet one{.indices = {3}};
  CHECK((measure(v, one).row(0).array() == v.values().row(3).array()).all());
  SensorSet all;
  for (std::size_t i = 0; i < 10; ++i) all.indices.push_back(i);
  CHECK((measure(v, all).array() == v.values().array()).all());
  SensorSet some{.indices = {1, 4, 8}};
  const auto red = apply_plan(v, make_plan_from_rows(10, 4, some.indices));
  CHECK((measure(v, some).array() == red.reduced.array()).all());
  SensorSet bad{.indices = {10}};
  CHECK_THROWS_AS(measure(v, bad), ValidationError);
}

TEST_CASE("wake sensors decode to unique grid points") {
  SyntheticSpec spec{.kind = SyntheticKind::oscillatory_wake, .n_x = 30, .n_y = 15, .k = 40, .rank = 6, .seed = 1};
  const auto m = flatten(gen_oscillatory_wake(spec));
  const auto f = svd_truncated(m.values(), ModeCountRule{6});
  const auto s = place_sensors(f, 30, m.origin()->shape);
  REQUIRE(s.grid_coords.has_value());
  std::set<GridPoint> unique(s.grid_coords->begin(), s.grid_coords->end());
  CHECK(unique.size() == 30);
  for (std::size_t i = 0; i < s.p(); ++i) CHECK(encode_row(m.origin()->shape, (*s.grid_coords)[i]) == s.indices[i]);
}
