#include "lcsvd/lcsvd.hpp"

#include <string>

#include "lcsvd/error.hpp"

namespace lcsvd {

namespace {

constexpr double kDriftLimit = 1e-10;
constexpr double kSigmaGuard = 1e-14;

Eigen::VectorXd guarded_inverse(const Eigen::VectorXd& sigma) {
  if (sigma.size() == 0) throw NumericalError("lcsvd: truncation retained no modes");
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > kSigmaGuard * sigma(0)))
      throw NumericalError("lcsvd: singular value " + std::to_string(i + 1) +
                           " is below 1e-14 sigma_1, Sigma cannot be inverted");
  }
  return sigma.cwiseInverse();
}

// Steps 1-5 given the reduced matrix, a product with the space-full matrix
// and the time-full matrix.
template <class SpaceFullTimes>
LcsvdResult run(const Eigen::MatrixXd& reduced, SpaceFullTimes space_full_times,
                const Eigen::MatrixXd& time_full, const TruncationRule& rule, LcsvdOptions options) {
  LcsvdResult out;
  out.reduced_factorization = svd_truncated(reduced, rule);
  auto& f = out.reduced_factorization;
  renormalize(f, reduced);

  const Eigen::VectorXd inv = guarded_inverse(f.singular_values);
  const Eigen::MatrixXd t_scaled = f.coefficients * inv.asDiagonal();
  out.recovered_modes = space_full_times(t_scaled);
  const Eigen::MatrixXd w_scaled = f.modes * inv.asDiagonal();
  out.recovered_coefficients.noalias() = time_full.transpose() * w_scaled;

  if (options.materialize_reconstruction) out.reconstruction = out.reconstruct();
  return out;
}

}  // namespace

Eigen::MatrixXd LcsvdResult::reconstruct() const {
  const Eigen::MatrixXd scaled = recovered_modes * reduced_factorization.singular_values.asDiagonal();
  Eigen::MatrixXd out(recovered_modes.rows(), recovered_coefficients.rows());
  out.noalias() = scaled * recovered_coefficients.transpose();
  return out;
}

Eigen::VectorXd sign_alignment(const Eigen::MatrixXd& w, const Eigen::MatrixXd& v, const Eigen::MatrixXd& t) {
  require(w.rows() == v.rows() && t.rows() == v.cols() && w.cols() == t.cols(),
          "sign_alignment: incompatible dimensions");
  const Eigen::MatrixXd wv = w.transpose() * v;
  Eigen::VectorXd s(w.cols());
  for (Eigen::Index i = 0; i < w.cols(); ++i) s(i) = wv.row(i).dot(t.col(i)) < 0.0 ? -1.0 : 1.0;
  return s;
}

void renormalize(TruncatedFactorization& f, const Eigen::MatrixXd& reduced) {
  if (orthonormality_drift(f.modes) > kDriftLimit) f.modes = qr_plain(f.modes).q;
  if (orthonormality_drift(f.coefficients) > kDriftLimit) f.coefficients = qr_plain(f.coefficients).q;
  f.coefficients *= sign_alignment(f.modes, reduced, f.coefficients).asDiagonal();
}

LcsvdResult lcsvd_run(const ReducedMatrices& m, const TruncationRule& rule, LcsvdOptions options) {
  require(m.reduced.size() > 0, "lcsvd_run: empty reduced matrix");
  require(m.space_full.cols() == m.reduced.cols() && m.time_full.rows() == m.reduced.rows() &&
              m.space_full.rows() >= m.reduced.rows() && m.time_full.cols() >= m.reduced.cols(),
          "lcsvd_run: semi-reduced matrices are inconsistent with the reduced matrix");
  auto space_times = [&](const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out(m.space_full.rows(), x.cols());
    out.noalias() = m.space_full * x;
    return out;
  };
  return run(m.reduced, space_times, m.time_full, rule, options);
}

LcsvdResult lcsvd_run(const SnapshotMatrix& source, const ReductionPlan& plan, const TruncationRule& rule,
                      LcsvdOptions options) {
  require(plan.j() == source.j() && plan.k() == source.k(), "lcsvd_run: plan does not match matrix");
  const auto& v = source.values();
  const Eigen::MatrixXd time_full = plan.keeps_all_rows() ? v : select_rows(v, plan.rows());
  const Eigen::MatrixXd reduced = plan.keeps_all_cols() ? time_full : select_cols(time_full, plan.cols());
  auto space_times = [&](const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out(v.rows(), x.cols());
    if (plan.keeps_all_cols()) {
      out.noalias() = v * x;
    } else {
      // Scatter into a K x N operand so the product reads V in place.
      Eigen::MatrixXd scattered = Eigen::MatrixXd::Zero(v.cols(), x.cols());
      for (std::size_t i = 0; i < plan.cols().size(); ++i)
        scattered.row(static_cast<Eigen::Index>(plan.cols()[i])) = x.row(static_cast<Eigen::Index>(i));
      out.noalias() = v * scattered;
    }
    return out;
  };
  return run(reduced, space_times, time_full, rule, options);
}

}  // namespace lcsvd
