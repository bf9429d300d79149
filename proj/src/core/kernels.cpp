#include "kernels.hpp"

#include <dlfcn.h>

#include <Eigen/Dense>
#include <cstdlib>
#include <mutex>

#include "lcsvd/error.hpp"

namespace lcsvd::kernels {

namespace {

// CBLAS / LAPACKE enum values.
constexpr int kColMajorCblas = 102, kLower = 122, kNoTrans = 111, kTrans = 112;
constexpr int kColMajorLapacke = 102;

struct Api {
  void (*dsyrk)(int, int, int, int, int, double, const double*, int, double, double*, int) = nullptr;
  int (*dsyevd)(int, char, char, int, double*, int, double*) = nullptr;
  int (*dgesdd)(int, char, int, int, double*, int, double*, double*, int, double*, int) = nullptr;
  int (*dgesvd)(int, char, char, int, int, double*, int, double*, double*, int, double*, int, double*) = nullptr;
  void (*set_threads)(int) = nullptr;
  char* (*corename)() = nullptr;
};

Api api;
std::once_flag loaded;
std::string load_error;

void* open_first(std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (void* h = dlopen(n, RTLD_NOW | RTLD_GLOBAL)) return h;
  return nullptr;
}

template <class F>
void bind(void* lib, F& slot, const char* name) {
  slot = reinterpret_cast<F>(dlsym(lib, name));
  if (!slot) throw NumericalError(std::string("BLAS/LAPACK symbol not found: ") + name);
}

// A broken kernel set shows up immediately on a modest random product and SVD.
void self_check() {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(200, 120);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(120, 120);
  api.dsyrk(kColMajorCblas, kLower, kTrans, 120, 200, 1.0, a.data(), 200, 0.0, g.data(), 120);
  const Eigen::MatrixXd ref = a.transpose() * a;
  const double gram_err =
      (Eigen::MatrixXd(g.triangularView<Eigen::Lower>()) - Eigen::MatrixXd(ref.triangularView<Eigen::Lower>()))
          .norm() /
      ref.norm();

  Eigen::MatrixXd work = a, u(200, 120), vt(120, 120);
  Eigen::VectorXd s(120);
  const int info = api.dgesdd(kColMajorLapacke, 'S', 200, 120, work.data(), 200, s.data(), u.data(), 200,
                              vt.data(), 120);
  const double svd_err = (u * s.asDiagonal() * vt - a).norm() / a.norm();
  if (!(gram_err < 1e-12) || info != 0 || !(svd_err < 1e-12))
    throw NumericalError("BLAS/LAPACK self-check failed on core '" + core_name() +
                         "'; set OPENBLAS_CORETYPE to a working kernel set (e.g. Haswell)");
}

void load() {
  if (!std::getenv("OPENBLAS_CORETYPE") && __builtin_cpu_supports("avx512f"))
    setenv("OPENBLAS_CORETYPE", "SkylakeX", 0);
  void* blas = open_first({"libopenblas.so.0", "libopenblas.so"});
  void* lapacke = open_first({"liblapacke.so.3", "liblapacke.so"});
  if (!blas || !lapacke) throw NumericalError(std::string("cannot load OpenBLAS/LAPACKE: ") + dlerror());
  bind(blas, api.dsyrk, "cblas_dsyrk");
  bind(blas, api.set_threads, "openblas_set_num_threads");
  bind(blas, api.corename, "openblas_get_corename");
  bind(lapacke, api.dsyevd, "LAPACKE_dsyevd");
  bind(lapacke, api.dgesdd, "LAPACKE_dgesdd");
  bind(lapacke, api.dgesvd, "LAPACKE_dgesvd");
  self_check();
}

const Api& get() {
  std::call_once(loaded, [] {
    try {
      load();
    } catch (const Error& e) {
      load_error = e.what();
    }
  });
  if (!load_error.empty()) throw NumericalError(load_error);
  return api;
}

}  // namespace

void dsyrk_lower(bool trans, int n, int k, const double* a, int lda, double* c, int ldc) {
  get().dsyrk(kColMajorCblas, kLower, trans ? kTrans : kNoTrans, n, k, 1.0, a, lda, 0.0, c, ldc);
}

int dsyevd(int n, double* a, int lda, double* w) { return get().dsyevd(kColMajorLapacke, 'V', 'L', n, a, lda, w); }

int dgesdd(int m, int n, double* a, int lda, double* s, double* u, int ldu, double* vt, int ldvt) {
  return get().dgesdd(kColMajorLapacke, 'S', m, n, a, lda, s, u, ldu, vt, ldvt);
}

int dgesvd(int m, int n, double* a, int lda, double* s, double* u, int ldu, double* vt, int ldvt, double* superb) {
  return get().dgesvd(kColMajorLapacke, 'S', 'S', m, n, a, lda, s, u, ldu, vt, ldvt, superb);
}

void set_threads(int n) { get().set_threads(n); }

std::string core_name() {
  const auto& a = api;
  return a.corename ? a.corename() : "unknown";
}

}  // namespace lcsvd::kernels
