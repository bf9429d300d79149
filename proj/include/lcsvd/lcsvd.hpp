#pragma once

#include <Eigen/Dense>

#include "lcsvd/factor.hpp"
#include "lcsvd/snapshot.hpp"

namespace lcsvd {

struct LcsvdOptions {
  /// When false the J x K reconstruction is left empty; call LcsvdResult::reconstruct() on demand.
  bool materialize_reconstruction = true;
};

struct LcsvdResult {
  TruncatedFactorization reduced_factorization;  // re-normalized, sign-aligned factors of the reduced matrix
  Eigen::MatrixXd recovered_modes;               // J x N
  Eigen::MatrixXd recovered_coefficients;        // K x N
  Eigen::MatrixXd reconstruction;                // J x K, or empty

  std::size_t n_retained() const { return reduced_factorization.n_retained(); }
  bool has_reconstruction() const { return reconstruction.size() > 0; }

  /// recovered_modes * diag(sigma) * recovered_coefficients^T
  Eigen::MatrixXd reconstruct() const;
};

/// sign(diag(W^T V T)) with sign(0) = +1.
Eigen::VectorXd sign_alignment(const Eigen::MatrixXd& w, const Eigen::MatrixXd& v, const Eigen::MatrixXd& t);

/// Restores orthonormality of the reduced modes and coefficients with a QR
/// pass (only when drift exceeds 1e-10) and flips coefficient columns to
/// agree with sign(diag(W^T V T)). `reduced` is the matrix that was factored.
void renormalize(TruncatedFactorization& factors, const Eigen::MatrixXd& reduced);

/// Low-cost SVD: factor the reduced matrix, then lift modes and coefficients
/// back to full dimension through the semi-reduced matrices and reconstruct.
LcsvdResult lcsvd_run(const ReducedMatrices& reduced, const TruncationRule& rule, LcsvdOptions options = {});

/// Same computation reading the semi-reduced matrices straight from the
/// source, so the J x K-bar matrix is never copied.
LcsvdResult lcsvd_run(const SnapshotMatrix& source, const ReductionPlan& plan, const TruncationRule& rule,
                      LcsvdOptions options = {});

}  // namespace lcsvd
