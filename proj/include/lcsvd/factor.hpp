#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <variant>
#include <vector>

namespace lcsvd {

/// Keep the smallest N with sigma_{N+1} / sigma_1 <= epsilon.
struct ToleranceRule {
  double epsilon;
};

/// Keep exactly `count` modes, clamped to min(J, K) and to the numerical rank.
struct ModeCountRule {
  std::size_t count;
};

using TruncationRule = std::variant<ToleranceRule, ModeCountRule>;

/// V ~ W diag(sigma) T^T with orthonormal W (J x N) and T (K x N).
struct TruncatedFactorization {
  Eigen::MatrixXd modes;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd coefficients;

  std::size_t n_retained() const { return static_cast<std::size_t>(singular_values.size()); }
};

struct PivotedQR {
  Eigen::MatrixXd q;             // m x s, orthonormal columns
  Eigen::MatrixXd r;             // s x n, upper trapezoidal
  std::vector<std::size_t> pivots;  // full column permutation; the first s entries are the selections
};

struct ThinQR {
  Eigen::MatrixXd q;  // m x n
  Eigen::MatrixXd r;  // n x n, positive diagonal
};

enum class SvdRoute {
  automatic,  // direct for moderate sizes, Gram eigen-decomposition for very large inputs
  direct,     // LAPACK divide-and-conquer on the matrix itself
  gram,       // eigen-decomposition of the smaller Gram matrix (method of snapshots)
};

/// Inputs above this many entries take the Gram route under SvdRoute::automatic.
inline constexpr std::size_t kGramRouteEntries = std::size_t{1} << 25;

/// Singular values at or below this fraction of sigma_1 are treated as zero.
inline constexpr double kRankCutoff = 1e-14;

/// Truncated SVD with the column sign convention "largest-magnitude entry of each mode is positive".
/// Throws NumericalError for a zero matrix, ValidationError for a bad rule or non-finite input.
TruncatedFactorization svd_truncated(const Eigen::MatrixXd& matrix, const TruncationRule& rule,
                                     SvdRoute route = SvdRoute::automatic);

/// Number of modes `rule` retains for the given non-increasing spectrum.
std::size_t select_mode_count(const Eigen::VectorXd& singular_values, const TruncationRule& rule,
                              double rank_cutoff = kRankCutoff);

void validate_rule(const TruncationRule& rule);

/// Householder QR with greedy column pivoting: every step takes the remaining
/// column of largest residual 2-norm, ties going to the lowest original index.
/// At most `max_steps` steps are taken (default min(m, n)).
/// Throws NumericalError if every column is zero.
PivotedQR qr_pivoted(const Eigen::MatrixXd& matrix,
                     std::size_t max_steps = std::numeric_limits<std::size_t>::max());

/// Householder QR of a full-column-rank matrix, normalized to a positive R diagonal.
/// Throws NumericalError when a diagonal entry of R falls below 1e-12 of the largest column norm.
ThinQR qr_plain(const Eigen::MatrixXd& matrix);

/// max |Q^T Q - I|.
double orthonormality_drift(const Eigen::MatrixXd& q);

}  // namespace lcsvd
