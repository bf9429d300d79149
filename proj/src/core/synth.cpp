#include "lcsvd/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lcsvd/error.hpp"
#include "lcsvd/rng.hpp"

namespace lcsvd {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Smooth onset just behind the cylinder.
double downstream_ramp(double x) { return logistic((x - 0.5) / 0.2); }

// Smooth solid-body mask: ~0 inside the cylinder, ~1 outside.
double body_mask(double x, double y) {
  return logistic((std::hypot(x, y) - WakeField::kRadius) / 0.05);
}

Eigen::MatrixXd normal_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

void add_noise(Eigen::MatrixXd& v, double level, std::uint64_t seed) {
  if (level == 0.0) return;
  const double sigma = level * v.norm() / std::sqrt(static_cast<double>(v.size()));
  Rng rng(Rng::derive(seed, kNoiseStream));
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] += sigma * rng.normal();
}

Eigen::MatrixXd low_rank_values(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  const Eigen::MatrixXd a = normal_matrix(rng, spec.j, spec.rank);
  const Eigen::MatrixXd b = normal_matrix(rng, spec.k, spec.rank);
  Eigen::MatrixXd v(a.rows(), b.rows());
  v.noalias() = a * b.transpose();
  return v;
}

}  // namespace

void SyntheticSpec::validate() const {
  require(std::isfinite(noise_level) && noise_level >= 0.0, "synthetic spec: noise_level must be >= 0");
  require(k >= 1, "synthetic spec: k must be positive");
  if (kind == SyntheticKind::oscillatory_wake) {
    require(n_comp == 2, "oscillatory_wake: exactly two velocity components");
    require(n_x >= 2 && n_y >= 2, "oscillatory_wake: grid needs at least 2 x 2 points");
    require(std::isfinite(amplitude), "oscillatory_wake: amplitude must be finite");
    const std::size_t pairs = (rank + 1) / 2;
    require(k >= 2 * pairs + 1, "oscillatory_wake: k must exceed the rank");
  } else {
    require(j >= 1, "synthetic spec: j must be positive");
    require(rank >= 1 && rank <= std::min(j, k), "synthetic spec: rank must be in [1, min(J, K)]");
  }
}

SnapshotMatrix gen_exact_rank(const SyntheticSpec& spec) {
  spec.validate();
  return SnapshotMatrix(low_rank_values(spec));
}

SnapshotMatrix gen_noisy(const SyntheticSpec& spec) {
  spec.validate();
  auto v = low_rank_values(spec);
  add_noise(v, spec.noise_level, spec.seed);
  return SnapshotMatrix(std::move(v));
}

WakeField::WakeField(std::size_t pairs, double amplitude, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t base_cycles = std::max<std::size_t>(1, k / (8 * std::max<std::size_t>(pairs, 1)));
  for (std::size_t m = 1; m <= pairs; ++m) {
    const double md = static_cast<double>(m);
    pairs_.push_back(Pair{
        .amplitude = amplitude * std::pow(0.6, md - 1.0),
        .omega = 2.0 * std::numbers::pi * static_cast<double>(m * base_cycles) / static_cast<double>(k),
        .wavenumber = 2.0 * std::numbers::pi * md / 4.0,
        .phase = 2.0 * std::numbers::pi * rng.uniform(),
        .centre = 4.0 + 1.5 * md,
        .spread = 3.0,
    });
  }
}

double WakeField::mean(std::size_t component, double x, double y) const {
  if (component != 0) return 0.0;
  const double width = 0.6 + 0.05 * std::log1p(std::exp(x));
  const double deficit = 0.8 * downstream_ramp(x) * std::exp(-y * y / (2.0 * width * width));
  return body_mask(x, y) * (1.0 - deficit);
}

double WakeField::fluctuation(std::size_t component, double x, double y, double t) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    const double sy = 1.0 + 0.1 * static_cast<double>(i + 1);
    const double envelope = downstream_ramp(x) *
                            std::exp(-(x - p.centre) * (x - p.centre) / (2.0 * p.spread * p.spread)) *
                            std::exp(-y * y / (2.0 * sy * sy));
    // Alternate which component carries the antisymmetric (y-odd) shape.
    const bool odd_u = (i % 2 == 0);
    const double shape = (component == 0) == odd_u ? y / sy : 1.0;
    const double theta = p.omega * t - p.wavenumber * x + p.phase;
    total += p.amplitude * envelope * shape * (component == 0 ? std::cos(theta) : std::sin(theta));
  }
  return body_mask(x, y) * total;
}

double WakeField::velocity(std::size_t component, double x, double y, double t) const {
  return mean(component, x, y) + fluctuation(component, x, y, t);
}

double WakeField::amplitude_sum() const {
  double s = 0.0;
  for (const auto& p : pairs_) s += std::abs(p.amplitude);
  return s;
}

double grid_coordinate(std::size_t i, std::size_t n, double lo, double hi) {
  return n <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

SnapshotTensor gen_oscillatory_wake(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t pairs = (spec.rank + 1) / 2;
  const WakeField field(pairs, spec.amplitude, spec.k, spec.seed);
  TensorShape shape{.n_comp = 2, .n_x = spec.n_x, .n_y = spec.n_y, .n_z = std::nullopt, .n_t = spec.k};
  Eigen::MatrixXd v(static_cast<Eigen::Index>(shape.spatial_size()), static_cast<Eigen::Index>(spec.k));
  for (std::size_t t = 0; t < spec.k; ++t) {
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t iy = 0; iy < spec.n_y; ++iy) {
        const double y = grid_coordinate(iy, spec.n_y, WakeField::kYMin, WakeField::kYMax);
        for (std::size_t ix = 0; ix < spec.n_x; ++ix) {
          const double x = grid_coordinate(ix, spec.n_x, WakeField::kXMin, WakeField::kXMax);
          const auto row = encode_row(shape, GridPoint{c, ix, iy, 0});
          v(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(t)) =
              field.velocity(c, x, y, static_cast<double>(t));
        }
      }
    }
  }
  add_noise(v, spec.noise_level, spec.seed);
  return SnapshotTensor(shape, std::move(v), 1.0);
}

}  // namespace lcsvd
