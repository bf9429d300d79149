#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lcsvd/factor.hpp"
#include "lcsvd/lcsvd.hpp"
#include "lcsvd/optimize.hpp"
#include "lcsvd/snapshot.hpp"

namespace lcsvd {

enum class MatrixFormat { snt, csv };

MatrixFormat parse_format(const std::string& name);
/// Parses "tol:<eps>" or "modes:<n>".
TruncationRule parse_rule(const std::string& text);
std::string describe_rule(const TruncationRule& rule);

/// Writes `matrix` as <stem>.snt or <stem>.csv. With SNT1 and a tensor layout
/// whose spatial size matches the rows, the layout is kept and n_t becomes
/// the column count.
void write_matrix(const std::filesystem::path& dir, const std::string& stem, const Eigen::MatrixXd& matrix,
                  MatrixFormat format, const std::optional<TensorOrigin>& layout = {});

/// modes, singular_values.csv, coefficients and summary.json.
void write_decomposition(const std::filesystem::path& dir, const SnapshotMatrix& source,
                         const TruncatedFactorization& factors, const TruncationRule& rule, MatrixFormat format);

/// The dataset's tensor view, or a single-component J x 1 field when it has no origin.
SnapshotTensor as_tensor(const SnapshotMatrix& matrix);
SnapshotTensor as_tensor(const Eigen::MatrixXd& values, const std::optional<TensorOrigin>& origin);

/// reconstruction, recovered modes/coefficients, the error report and summary.json.
/// `extra` is merged into summary.json (a JSON object in text form).
void write_reconstruction(const std::filesystem::path& dir, const SnapshotMatrix& source, const LcsvdResult& result,
                          std::size_t n_sensors, MatrixFormat format, const std::string& extra_json = "{}");

void write_search(const std::filesystem::path& dir, const SensorCountSearchResult& result,
                  const SensorCountSearchConfig& config, double mode_fraction);

void write_elbow(const std::filesystem::path& dir, const std::vector<ElbowCurve>& curves, double mode_fraction,
                 std::size_t runs);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace lcsvd
