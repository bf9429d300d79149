#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lcsvd {

/// Shape of a multi-component spatio-temporal field.
///
/// Values are laid out with x fastest, then y, then z, then component, then
/// time. A flattened snapshot therefore stacks one x-fastest block per
/// component, and row r of the snapshot matrix decodes as
///   r = x + n_x * (y + n_y * (z + n_z * component)).
struct TensorShape {
  std::size_t n_comp = 1;
  std::size_t n_x = 1;
  std::size_t n_y = 1;
  std::optional<std::size_t> n_z;  // absent for 2-D data
  std::size_t n_t = 1;

  std::size_t depth() const { return n_z.value_or(1); }
  std::size_t points_per_component() const { return n_x * n_y * depth(); }
  std::size_t spatial_size() const { return n_comp * points_per_component(); }
  std::size_t value_count() const { return spatial_size() * n_t; }
  bool is_3d() const { return n_z.has_value(); }

  /// Throws ValidationError for zero extents or overflowing products.
  void validate() const;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

struct GridPoint {
  std::size_t component = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

GridPoint decode_row(const TensorShape& shape, std::size_t row);
std::size_t encode_row(const TensorShape& shape, const GridPoint& point);

/// Dense field with its grid metadata. Values are stored as a J x K matrix in
/// the documented layout, so flattening is a reshape.
class SnapshotTensor {
 public:
  SnapshotTensor(TensorShape shape, Eigen::MatrixXd values, std::optional<double> u_inf = {});
  SnapshotTensor(TensorShape shape, std::span<const double> flat, std::optional<double> u_inf = {});

  const TensorShape& shape() const { return shape_; }
  const Eigen::MatrixXd& values() const { return values_; }
  std::optional<double> u_inf() const { return u_inf_; }

  double at(std::size_t comp, std::size_t x, std::size_t y, std::size_t z, std::size_t t) const;

  /// Hands the storage over without a copy.
  Eigen::MatrixXd release() && { return std::move(values_); }

 private:
  TensorShape shape_;
  Eigen::MatrixXd values_;
  std::optional<double> u_inf_;
};

struct TensorOrigin {
  TensorShape shape;
  std::optional<double> u_inf;

  friend bool operator==(const TensorOrigin&, const TensorOrigin&) = default;
};

/// J x K matrix whose column k is snapshot k.
class SnapshotMatrix {
 public:
  explicit SnapshotMatrix(Eigen::MatrixXd values, std::optional<TensorOrigin> origin = {});

  const Eigen::MatrixXd& values() const { return values_; }
  const std::optional<TensorOrigin>& origin() const { return origin_; }
  std::size_t j() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t k() const { return static_cast<std::size_t>(values_.cols()); }

 private:
  Eigen::MatrixXd values_;
  std::optional<TensorOrigin> origin_;
};

SnapshotMatrix flatten(const SnapshotTensor& tensor);
SnapshotMatrix flatten(SnapshotTensor&& tensor);

/// Inverse of flatten. shape.spatial_size() must equal J and shape.n_t must equal K.
SnapshotTensor unflatten(const SnapshotMatrix& matrix, const TensorShape& shape,
                         std::optional<double> u_inf = {});
/// Uses the matrix's recorded origin.
SnapshotTensor unflatten(const SnapshotMatrix& matrix);

enum class PlanStrategy { sensors, equidistant, random };

/// Retained rows (space) and columns (time) of a J x K snapshot matrix.
class ReductionPlan {
 public:
  ReductionPlan(std::size_t j, std::size_t k, std::vector<std::size_t> rows,
                std::vector<std::size_t> cols, PlanStrategy strategy,
                std::optional<std::uint64_t> seed = {});

  static ReductionPlan identity(std::size_t j, std::size_t k);

  std::size_t j() const { return j_; }
  std::size_t k() const { return k_; }
  const std::vector<std::size_t>& rows() const { return rows_; }
  const std::vector<std::size_t>& cols() const { return cols_; }
  PlanStrategy strategy() const { return strategy_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  bool keeps_all_rows() const { return rows_.size() == j_; }
  bool keeps_all_cols() const { return cols_.size() == k_; }

  friend bool operator==(const ReductionPlan&, const ReductionPlan&) = default;

 private:
  std::size_t j_;
  std::size_t k_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  PlanStrategy strategy_;
  std::optional<std::uint64_t> seed_;
};

/// round(i * (dim - 1) / (n - 1)) for i in [0, n), half rounded up; n == 1 gives {0}.
std::vector<std::size_t> equidistant_indices(std::size_t dim, std::size_t n);

ReductionPlan make_plan_equidistant(std::size_t j, std::size_t k, std::size_t n_rows,
                                    std::size_t n_cols);
ReductionPlan make_plan_random(std::size_t j, std::size_t k, std::size_t n_rows,
                               std::size_t n_cols, std::uint64_t seed);
/// Rows at the given (unordered) sensor indices, all columns.
ReductionPlan make_plan_from_rows(std::size_t j, std::size_t k, std::span<const std::size_t> rows,
                                  PlanStrategy strategy = PlanStrategy::sensors);

/// The reduced matrix and both semi-reduced matrices of a plan.
struct ReducedMatrices {
  Eigen::MatrixXd reduced;     // retained rows x retained cols
  Eigen::MatrixXd space_full;  // all rows x retained cols
  Eigen::MatrixXd time_full;   // retained rows x all cols
};

ReducedMatrices apply_plan(const SnapshotMatrix& matrix, const ReductionPlan& plan);

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const std::size_t> rows);
Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m, std::span<const std::size_t> cols);

}  // namespace lcsvd
