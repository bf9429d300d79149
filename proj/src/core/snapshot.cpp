#include "lcsvd/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lcsvd/error.hpp"
#include "lcsvd/rng.hpp"

namespace lcsvd {

namespace {

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    throw ValidationError("tensor shape overflows size_t");
  return a * b;
}

void require_finite(const Eigen::MatrixXd& values, const char* what) {
  if (!values.allFinite()) throw ValidationError(std::string(what) + ": non-finite value");
}

void check_indices(const std::vector<std::size_t>& idx, std::size_t dim, const char* what) {
  require(!idx.empty(), std::string(what) + ": at least one index required");
  for (std::size_t i = 0; i < idx.size(); ++i) {
    require(idx[i] < dim, std::string(what) + ": index " + std::to_string(idx[i]) +
                              " out of range [0, " + std::to_string(dim) + ")");
    require(i == 0 || idx[i] > idx[i - 1], std::string(what) + ": indices must be strictly increasing");
  }
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

void TensorShape::validate() const {
  require(n_comp > 0 && n_x > 0 && n_y > 0 && n_t > 0, "tensor shape: extents must be positive");
  require(!n_z || *n_z > 0, "tensor shape: n_z must be positive when present");
  checked_mul(checked_mul(checked_mul(checked_mul(n_comp, n_x), n_y), depth()), n_t);
}

GridPoint decode_row(const TensorShape& shape, std::size_t row) {
  require(row < shape.spatial_size(), "decode_row: row out of range");
  GridPoint p;
  p.x = row % shape.n_x;
  row /= shape.n_x;
  p.y = row % shape.n_y;
  row /= shape.n_y;
  p.z = row % shape.depth();
  p.component = row / shape.depth();
  return p;
}

std::size_t encode_row(const TensorShape& shape, const GridPoint& p) {
  require(p.component < shape.n_comp && p.x < shape.n_x && p.y < shape.n_y && p.z < shape.depth(),
          "encode_row: grid point out of range");
  return p.x + shape.n_x * (p.y + shape.n_y * (p.z + shape.depth() * p.component));
}

SnapshotTensor::SnapshotTensor(TensorShape shape, Eigen::MatrixXd values, std::optional<double> u_inf)
    : shape_(shape), values_(std::move(values)), u_inf_(u_inf) {
  shape_.validate();
  require(static_cast<std::size_t>(values_.rows()) == shape_.spatial_size() &&
              static_cast<std::size_t>(values_.cols()) == shape_.n_t,
          "SnapshotTensor: value count does not match shape");
  require(!u_inf_ || (std::isfinite(*u_inf_) && *u_inf_ > 0.0), "SnapshotTensor: u_inf must be positive");
  require_finite(values_, "SnapshotTensor");
}

SnapshotTensor::SnapshotTensor(TensorShape shape, std::span<const double> flat, std::optional<double> u_inf)
    : SnapshotTensor(
          shape,
          [&] {
            shape.validate();
            require(flat.size() == shape.value_count(), "SnapshotTensor: value count does not match shape");
            return Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(
                flat.data(), static_cast<Eigen::Index>(shape.spatial_size()),
                static_cast<Eigen::Index>(shape.n_t)));
          }(),
          u_inf) {}

double SnapshotTensor::at(std::size_t comp, std::size_t x, std::size_t y, std::size_t z, std::size_t t) const {
  require(t < shape_.n_t, "SnapshotTensor::at: time index out of range");
  const auto row = encode_row(shape_, GridPoint{comp, x, y, z});
  return values_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(t));
}

SnapshotMatrix::SnapshotMatrix(Eigen::MatrixXd values, std::optional<TensorOrigin> origin)
    : values_(std::move(values)), origin_(std::move(origin)) {
  require(values_.rows() > 0 && values_.cols() > 0, "SnapshotMatrix: empty matrix");
  if (origin_) {
    origin_->shape.validate();
    require(origin_->shape.spatial_size() == j() && origin_->shape.n_t == k(),
            "SnapshotMatrix: origin shape does not match J x K");
  }
  require_finite(values_, "SnapshotMatrix");
}

SnapshotMatrix flatten(const SnapshotTensor& tensor) {
  return SnapshotMatrix(tensor.values(), TensorOrigin{tensor.shape(), tensor.u_inf()});
}

SnapshotMatrix flatten(SnapshotTensor&& tensor) {
  TensorOrigin origin{tensor.shape(), tensor.u_inf()};
  return SnapshotMatrix(std::move(tensor).release(), origin);
}

SnapshotTensor unflatten(const SnapshotMatrix& matrix, const TensorShape& shape, std::optional<double> u_inf) {
  shape.validate();
  if (shape.spatial_size() != matrix.j() || shape.n_t != matrix.k())
    throw ValidationError("unflatten: shape " + std::to_string(shape.spatial_size()) + "x" +
                          std::to_string(shape.n_t) + " does not match matrix " +
                          std::to_string(matrix.j()) + "x" + std::to_string(matrix.k()));
  return SnapshotTensor(shape, matrix.values(), u_inf);
}

SnapshotTensor unflatten(const SnapshotMatrix& matrix) {
  require(matrix.origin().has_value(), "unflatten: matrix has no tensor origin");
  return unflatten(matrix, matrix.origin()->shape, matrix.origin()->u_inf);
}

ReductionPlan::ReductionPlan(std::size_t j, std::size_t k, std::vector<std::size_t> rows,
                             std::vector<std::size_t> cols, PlanStrategy strategy,
                             std::optional<std::uint64_t> seed)
    : j_(j), k_(k), rows_(std::move(rows)), cols_(std::move(cols)), strategy_(strategy), seed_(seed) {
  require(j > 0 && k > 0, "ReductionPlan: dimensions must be positive");
  check_indices(rows_, j_, "ReductionPlan rows");
  check_indices(cols_, k_, "ReductionPlan cols");
}

ReductionPlan ReductionPlan::identity(std::size_t j, std::size_t k) {
  return ReductionPlan(j, k, iota(j), iota(k), PlanStrategy::equidistant);
}

std::vector<std::size_t> equidistant_indices(std::size_t dim, std::size_t n) {
  require(n >= 1 && n <= dim, "equidistant_indices: count must be in [1, dim]");
  if (n == 1) return {0};
  std::vector<std::size_t> out(n);
  const std::size_t span = dim - 1;
  const std::size_t den = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    // floor((2 i span + den) / (2 den)) == round-half-up of i span / den
    const auto num = static_cast<unsigned __int128>(2) * i * span + den;
    out[i] = static_cast<std::size_t>(num / (static_cast<unsigned __int128>(2) * den));
  }
  return out;
}

ReductionPlan make_plan_equidistant(std::size_t j, std::size_t k, std::size_t n_rows, std::size_t n_cols) {
  require(n_rows >= 1 && n_rows <= j, "make_plan_equidistant: n_rows must be in [1, J]");
  require(n_cols >= 1 && n_cols <= k, "make_plan_equidistant: n_cols must be in [1, K]");
  return ReductionPlan(j, k, equidistant_indices(j, n_rows), equidistant_indices(k, n_cols),
                       PlanStrategy::equidistant);
}

ReductionPlan make_plan_random(std::size_t j, std::size_t k, std::size_t n_rows, std::size_t n_cols,
                               std::uint64_t seed) {
  require(n_rows >= 1 && n_rows <= j, "make_plan_random: n_rows must be in [1, J]");
  require(n_cols >= 1 && n_cols <= k, "make_plan_random: n_cols must be in [1, K]");
  Rng rng(seed);
  auto rows = sample_without_replacement(rng, j, n_rows);
  auto cols = sample_without_replacement(rng, k, n_cols);
  return ReductionPlan(j, k, std::move(rows), std::move(cols), PlanStrategy::random, seed);
}

ReductionPlan make_plan_from_rows(std::size_t j, std::size_t k, std::span<const std::size_t> rows,
                                  PlanStrategy strategy) {
  std::vector<std::size_t> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "make_plan_from_rows: duplicate row index");
  return ReductionPlan(j, k, std::move(sorted), iota(k), strategy);
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (std::size_t i = 0; i < rows.size(); ++i)
      out(static_cast<Eigen::Index>(i), c) = m(static_cast<Eigen::Index>(rows[i]), c);
  return out;
}

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m, std::span<const std::size_t> cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = m.col(static_cast<Eigen::Index>(cols[i]));
  return out;
}

ReducedMatrices apply_plan(const SnapshotMatrix& matrix, const ReductionPlan& plan) {
  if (plan.j() != matrix.j() || plan.k() != matrix.k())
    throw ValidationError("apply_plan: plan built for " + std::to_string(plan.j()) + "x" +
                          std::to_string(plan.k()) + ", matrix is " + std::to_string(matrix.j()) + "x" +
                          std::to_string(matrix.k()));
  ReducedMatrices out;
  const auto& v = matrix.values();
  out.space_full = plan.keeps_all_cols() ? v : select_cols(v, plan.cols());
  out.time_full = plan.keeps_all_rows() ? v : select_rows(v, plan.rows());
  out.reduced = plan.keeps_all_cols() ? out.time_full : select_cols(out.time_full, plan.cols());
  return out;
}

}  // namespace lcsvd
