#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lcsvd/factor.hpp"
#include "lcsvd/snapshot.hpp"

namespace lcsvd {

/// Point sensors as row indices into the flattened J-space, in selection order.
struct SensorSet {
  std::vector<std::size_t> indices;
  std::size_t n_basis = 0;
  std::optional<std::vector<GridPoint>> grid_coords;

  std::size_t p() const { return indices.size(); }
};

/// QR-pivot sensor selection against the columns of `modes` (J x N).
///
/// For p <= N the sensors are the first p pivots of the pivoted QR of W^T.
/// For p > N the pivots come from W W^T. That matrix has rank N, so its
/// pivoted QR runs out of residual after N steps; the remaining sensors are
/// taken by further pivoted-QR passes over the rows not yet selected, each
/// pass contributing up to N sensors. W W^T is never formed.
SensorSet place_sensors(const Eigen::MatrixXd& modes, std::size_t p,
                        const std::optional<TensorShape>& layout = {});
SensorSet place_sensors(const TruncatedFactorization& basis, std::size_t p,
                        const std::optional<TensorShape>& layout = {});

/// Rows of V at the sensor indices (P x K).
Eigen::MatrixXd measure(const SnapshotMatrix& matrix, const SensorSet& sensors);

/// Attach decoded grid coordinates for a layout.
void decode_sensors(SensorSet& sensors, const TensorShape& layout);

}  // namespace lcsvd
