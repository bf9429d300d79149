#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>

#include "lcsvd/sensors.hpp"
#include "lcsvd/snapshot.hpp"

namespace lcsvd {

// SNT1 tensor files: one ASCII header line
//   SNT1 n_comp n_x n_y n_z n_t u_inf\n
// (n_z = 1 for 2-D data, u_inf = 0 when absent) followed by the values as
// little-endian IEEE-754 doubles in the tensor layout order.

void write_snt(const std::filesystem::path& path, const SnapshotTensor& tensor);
SnapshotTensor read_snt(const std::filesystem::path& path);

/// Stores a bare J x K matrix as a single-component J x 1 field over K snapshots.
void write_snt(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);

/// Comma-separated, one row per spatial point, one column per snapshot.
/// Lines starting with '#' are skipped.
SnapshotMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);

/// SNT1 or CSV, chosen from the file's first bytes.
SnapshotMatrix load_dataset(const std::filesystem::path& path);

/// `index,component,x,y,z` per sensor, in selection order.
void write_sensors_csv(const std::filesystem::path& path, const SensorSet& sensors,
                       const std::optional<TensorShape>& layout = {});
SensorSet read_sensors_csv(const std::filesystem::path& path);

}  // namespace lcsvd
