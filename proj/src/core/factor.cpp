#include "lcsvd/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kernels.hpp"
#include "lcsvd/error.hpp"

namespace lcsvd {

namespace {

// sigma from a Gram eigenvalue carries absolute error ~ eps * sigma_1^2, so
// relative values below ~sqrt(eps) are noise on that route.
constexpr double kGramRankCutoff = 1e-7;

int as_lapack(Eigen::Index n) {
  if (n > std::numeric_limits<int>::max()) throw ValidationError("matrix too large for LAPACK");
  return static_cast<int>(n);
}

struct FullSpectrum {
  Eigen::MatrixXd left;    // m x p
  Eigen::VectorXd sigma;   // p
  Eigen::MatrixXd right;   // n x p
};

FullSpectrum direct_svd(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows(), n = a.cols(), p = std::min(m, n);
  Eigen::MatrixXd work = a;
  FullSpectrum out;
  out.left.resize(m, p);
  out.sigma.resize(p);
  Eigen::MatrixXd vt(p, n);
  int info = kernels::dgesdd(as_lapack(m), as_lapack(n), work.data(), as_lapack(m), out.sigma.data(),
                             out.left.data(), as_lapack(m), vt.data(), as_lapack(p));
  if (info > 0) {
    // dgesdd occasionally fails to converge where the QR-iteration driver succeeds.
    work = a;
    Eigen::VectorXd superb(std::max<Eigen::Index>(p - 1, 1));
    info = kernels::dgesvd(as_lapack(m), as_lapack(n), work.data(), as_lapack(m), out.sigma.data(),
                           out.left.data(), as_lapack(m), vt.data(), as_lapack(p), superb.data());
  }
  if (info != 0) throw NumericalError("SVD failed to converge (LAPACK info " + std::to_string(info) + ")");
  out.right = vt.transpose();
  return out;
}

// Eigen-decomposition of the Gram matrix on the smaller side. Returns spectrum
// in descending order; only the side that was diagonalized is filled.
struct GramSpectrum {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd vectors;  // eigenvectors of the Gram matrix, descending
  bool tall;                // true: vectors are right singular vectors
};

GramSpectrum gram_svd(const Eigen::MatrixXd& a) {
  const bool tall = a.rows() >= a.cols();
  const Eigen::Index n = tall ? a.cols() : a.rows();
  const Eigen::Index inner = tall ? a.rows() : a.cols();
  Eigen::MatrixXd g(n, n);
  kernels::dsyrk_lower(tall, as_lapack(n), as_lapack(inner), a.data(), as_lapack(a.rows()), g.data(),
                       as_lapack(n));
  Eigen::VectorXd lambda(n);
  const int info = kernels::dsyevd(as_lapack(n), g.data(), as_lapack(n), lambda.data());
  if (info != 0) throw NumericalError("Gram eigen-decomposition failed (LAPACK info " + std::to_string(info) + ")");
  GramSpectrum out;
  out.tall = tall;
  out.sigma.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.sigma(i) = std::sqrt(std::max(lambda(n - 1 - i), 0.0));
    out.vectors.col(i) = g.col(n - 1 - i);
  }
  return out;
}

void canonicalize_signs(TruncatedFactorization& f) {
  for (Eigen::Index c = 0; c < f.modes.cols(); ++c) {
    Eigen::Index arg = 0;
    f.modes.col(c).cwiseAbs().maxCoeff(&arg);
    if (f.modes(arg, c) < 0.0) {
      f.modes.col(c) *= -1.0;
      f.coefficients.col(c) *= -1.0;
    }
  }
}

}  // namespace

void validate_rule(const TruncationRule& rule) {
  if (const auto* tol = std::get_if<ToleranceRule>(&rule)) {
    require(tol->epsilon > 0.0 && tol->epsilon < 1.0, "tolerance rule: epsilon must be in (0, 1)");
  } else {
    require(std::get<ModeCountRule>(rule).count >= 1, "mode-count rule: count must be at least 1");
  }
}

std::size_t select_mode_count(const Eigen::VectorXd& s, const TruncationRule& rule, double rank_cutoff) {
  validate_rule(rule);
  if (s.size() == 0 || !(s(0) > 0.0)) throw NumericalError("truncation: zero matrix has no sigma_1");
  const auto p = static_cast<std::size_t>(s.size());
  std::size_t numerical_rank = 0;
  while (numerical_rank < p && s(static_cast<Eigen::Index>(numerical_rank)) > rank_cutoff * s(0))
    ++numerical_rank;

  std::size_t n = 0;
  if (const auto* tol = std::get_if<ToleranceRule>(&rule)) {
    n = p;
    for (std::size_t i = 1; i < p; ++i) {
      if (s(static_cast<Eigen::Index>(i)) / s(0) <= tol->epsilon) {
        n = i;
        break;
      }
    }
  } else {
    n = std::min(std::get<ModeCountRule>(rule).count, p);
  }
  return std::max<std::size_t>(1, std::min(n, numerical_rank));
}

TruncatedFactorization svd_truncated(const Eigen::MatrixXd& a, const TruncationRule& rule, SvdRoute route) {
  validate_rule(rule);
  require(a.rows() > 0 && a.cols() > 0, "svd_truncated: empty matrix");
  require(a.allFinite(), "svd_truncated: non-finite entry");
  if (route == SvdRoute::automatic)
    route = static_cast<std::size_t>(a.size()) > kGramRouteEntries ? SvdRoute::gram : SvdRoute::direct;

  TruncatedFactorization f;
  if (route == SvdRoute::direct) {
    auto full = direct_svd(a);
    const auto n = static_cast<Eigen::Index>(select_mode_count(full.sigma, rule));
    f.modes = full.left.leftCols(n);
    f.singular_values = full.sigma.head(n);
    f.coefficients = full.right.leftCols(n);
  } else {
    auto gram = gram_svd(a);
    const auto n = static_cast<Eigen::Index>(select_mode_count(gram.sigma, rule, kGramRankCutoff));
    f.singular_values = gram.sigma.head(n);
    const Eigen::VectorXd inv = f.singular_values.cwiseInverse();
    if (gram.tall) {
      f.coefficients = gram.vectors.leftCols(n);
      f.modes.noalias() = a * f.coefficients;
      f.modes *= inv.asDiagonal();
      if (orthonormality_drift(f.modes) > 1e-12) f.modes = qr_plain(f.modes).q;
    } else {
      f.modes = gram.vectors.leftCols(n);
      f.coefficients.noalias() = a.transpose() * f.modes;
      f.coefficients *= inv.asDiagonal();
      if (orthonormality_drift(f.coefficients) > 1e-12) f.coefficients = qr_plain(f.coefficients).q;
    }
  }
  canonicalize_signs(f);
  return f;
}

PivotedQR qr_pivoted(const Eigen::MatrixXd& a, std::size_t max_steps) {
  require(a.allFinite(), "qr_pivoted: non-finite entry");
  const Eigen::Index m = a.rows(), n = a.cols();
  require(m > 0 && n > 0, "qr_pivoted: empty matrix");
  const Eigen::Index steps =
      std::min<Eigen::Index>(std::min(m, n), static_cast<Eigen::Index>(std::min<std::size_t>(
                                                 max_steps, static_cast<std::size_t>(std::min(m, n)))));

  Eigen::MatrixXd r = a;
  std::vector<std::size_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Eigen::VectorXd taus(steps);
  Eigen::VectorXd workspace(n);

  for (Eigen::Index k = 0; k < steps; ++k) {
    Eigen::Index best = k;
    double best_norm = -1.0;
    for (Eigen::Index c = k; c < n; ++c) {
      const double norm = r.col(c).tail(m - k).squaredNorm();
      const auto idx = perm[static_cast<std::size_t>(c)];
      if (norm > best_norm || (norm == best_norm && idx < perm[static_cast<std::size_t>(best)])) {
        best = c;
        best_norm = norm;
      }
    }
    if (k == 0 && best_norm == 0.0) throw NumericalError("qr_pivoted: all columns are zero");
    if (best != k) {
      r.col(k).swap(r.col(best));
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(best)]);
    }
    double tau = 0.0, beta = 0.0;
    r.col(k).tail(m - k).makeHouseholderInPlace(tau, beta);
    taus(k) = tau;
    r(k, k) = beta;
    if (k + 1 < n) {
      r.bottomRightCorner(m - k, n - k - 1)
          .applyHouseholderOnTheLeft(r.col(k).tail(m - k - 1), tau, workspace.data());
    }
  }

  PivotedQR out;
  out.q = Eigen::MatrixXd::Identity(m, steps);
  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    out.q.bottomRightCorner(m - k, steps - k)
        .applyHouseholderOnTheLeft(r.col(k).tail(m - k - 1), taus(k), workspace.data());
  }
  out.r = r.topRows(steps).triangularView<Eigen::Upper>();
  out.pivots = std::move(perm);
  return out;
}

ThinQR qr_plain(const Eigen::MatrixXd& a) {
  require(a.allFinite(), "qr_plain: non-finite entry");
  const Eigen::Index m = a.rows(), n = a.cols();
  require(n > 0 && m >= n, "qr_plain: need rows >= cols > 0");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  ThinQR out;
  out.r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);

  const double scale = a.colwise().norm().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(out.r(i, i)) > 1e-12 * scale))
      throw NumericalError("qr_plain: matrix is rank deficient (column " + std::to_string(i) + ")");
    if (out.r(i, i) < 0.0) {
      out.r.row(i) *= -1.0;
      out.q.col(i) *= -1.0;
    }
  }
  return out;
}

double orthonormality_drift(const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd g = q.transpose() * q;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace lcsvd
