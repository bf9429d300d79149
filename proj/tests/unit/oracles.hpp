#pragma once

// Independent reference implementations. Nothing here calls into the library.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// One-sided Jacobi (Hestenes) on the columns of a; returns singular values, descending.
inline std::vector<double> jacobi_singular_values(Eigen::MatrixXd a) {
  if (a.rows() < a.cols()) a.transposeInPlace();
  const Eigen::Index n = a.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (gamma == 0.0) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        const Eigen::VectorXd cp = a.col(p);
        a.col(p) = c * cp - s * a.col(q);
        a.col(q) = s * cp + c * a.col(q);
      }
    }
    if (off < 1e-15) break;
  }
  std::vector<double> sv(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) sv[static_cast<std::size_t>(i)] = a.col(i).norm();
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

// Greedy column selection: repeatedly take the column with the largest
// residual norm after projecting out the chosen ones (modified Gram-Schmidt).
inline std::vector<std::size_t> greedy_pivots(const Eigen::MatrixXd& a, std::size_t steps) {
  Eigen::MatrixXd res = a;
  std::vector<bool> used(static_cast<std::size_t>(a.cols()), false);
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < steps; ++s) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double nrm = res.col(c).squaredNorm();
      if (nrm > best_norm) best = c, best_norm = nrm;
    }
    used[static_cast<std::size_t>(best)] = true;
    out.push_back(static_cast<std::size_t>(best));
    const Eigen::VectorXd q = res.col(best) / std::sqrt(best_norm);
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (!used[static_cast<std::size_t>(c)]) res.col(c) -= q.dot(res.col(c)) * q;
  }
  return out;
}

struct Moments {
  double mean, stddev;
};

inline Moments two_pass(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(x.size()))};
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// J / N rounded to nearest with integer arithmetic, halves up.
inline long long compression_rate(long long j, long long n) { return (2 * j + n) / (2 * n); }

inline double frobenius_ratio_percent(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    num += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
    den += a.data()[i] * a.data()[i];
  }
  return 100.0 * std::sqrt(num / den);
}

// Gaussian matrix from std's engine, independent of the library Rng.
inline Eigen::MatrixXd gaussian(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(gen);
  return m;
}

inline Eigen::MatrixXd low_rank(std::mt19937_64& gen, Eigen::Index j, Eigen::Index k, Eigen::Index r) {
  return gaussian(gen, j, r) * gaussian(gen, k, r).transpose();
}

}  // namespace oracle
