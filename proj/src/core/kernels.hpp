#pragma once

// Dense kernels from the system OpenBLAS/LAPACKE, loaded on first use.
//
// Loading is deferred so OPENBLAS_CORETYPE can be pinned before OpenBLAS
// picks its kernels: on AVX-512 BF16 machines OpenBLAS 0.3.20 selects its
// Cooperlake path, which returns wrong dgemm/dsyevd/dgesdd results. Unless the
// caller already set OPENBLAS_CORETYPE, SkylakeX is used on any AVX-512 CPU.
// A numerical self-check runs once after loading.

#include <string>

namespace lcsvd::kernels {

// Column-major, lower triangle: c = a^T a (trans) or a a^T.
void dsyrk_lower(bool trans, int n, int k, const double* a, int lda, double* c, int ldc);

// Eigenvalues ascending, eigenvectors overwrite a. Returns LAPACK info.
int dsyevd(int n, double* a, int lda, double* w);

// Thin SVD, jobz 'S'. Returns LAPACK info.
int dgesdd(int m, int n, double* a, int lda, double* s, double* u, int ldu, double* vt, int ldvt);
int dgesvd(int m, int n, double* a, int lda, double* s, double* u, int ldu, double* vt, int ldvt, double* superb);

void set_threads(int n);

std::string core_name();

}  // namespace lcsvd::kernels
