#pragma once

#include <cmath>
#include <cstddef>

#include "imcf/fields.hpp"

// Pointwise dense kernels for the small (n <= 6) symmetric matrices attached
// to each grid point. Packed arguments use sym2_index layout; dense scratch is
// row-major n*n on the caller's stack.

namespace imcf {

constexpr int kMaxDim = 6;

// Cholesky A = L L^T of a packed symmetric matrix. Returns false when A is not
// positive definite. L is dense lower-triangular.
inline bool chol_packed(int n, const double* a, double* L) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = a[sym2_index(n, j, i)];
      for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  return true;
}

inline double det_from_chol(int n, const double* L) {
  double d = 1.0;
  for (int i = 0; i < n; ++i) d *= L[i * n + i];
  return d * d;
}

// Solve L L^T x = b in place (b overwritten by x).
inline void chol_solve(int n, const double* L, double* b) {
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= L[i * n + k] * b[k];
    b[i] = s / L[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= L[k * n + i] * b[k];
    b[i] = s / L[i * n + i];
  }
}

// Packed inverse of a packed SPD matrix via its Cholesky factor.
inline void inverse_from_chol(int n, const double* L, double* inv_packed) {
  double e[kMaxDim];
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) e[i] = (i == c) ? 1.0 : 0.0;
    chol_solve(n, L, e);
    for (int r = c; r < n; ++r) inv_packed[sym2_index(n, c, r)] = e[r];
  }
}

// Largest eigenvalue of a packed symmetric matrix by cyclic Jacobi sweeps.
// Small fixed-size problems only; tolerance is absolute off-diagonal mass.
inline void sym_eigenvalues(int n, const double* a_packed, double* eig) {
  double a[kMaxDim * kMaxDim];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = a_packed[sym2_index(n, i, j)];
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (apq == 0.0) continue;
        double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  for (int i = 0; i < n; ++i) eig[i] = a[i * n + i];
}

// Eigenvalue range of the pencil (A, B) with B SPD: solves B^{-1/2} A B^{-1/2}
// through the Cholesky factor of B. Both inputs packed.
inline void generalized_eig_range(int n, const double* a_packed, const double* b_packed,
                                  double* lo, double* hi) {
  double L[kMaxDim * kMaxDim];
  bool ok = chol_packed(n, b_packed, L);
  if (!ok) { *lo = *hi = std::nan(""); return; }
  // M = L^{-1} A L^{-T}
  double col[kMaxDim], M[kMaxDim * kMaxDim];
  // first W = L^{-1} A (solve L W = A column-wise), then M = W L^{-T} row-wise
  double W[kMaxDim * kMaxDim];
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) col[i] = a_packed[sym2_index(n, i, c)];
    for (int i = 0; i < n; ++i) {
      double s = col[i];
      for (int k = 0; k < i; ++k) s -= L[i * n + k] * col[k];
      col[i] = s / L[i * n + i];
    }
    for (int i = 0; i < n; ++i) W[i * n + c] = col[i];
  }
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i < n; ++i) col[i] = W[r * n + i];
    for (int i = 0; i < n; ++i) {
      double s = col[i];
      for (int k = 0; k < i; ++k) s -= L[i * n + k] * col[k];
      col[i] = s / L[i * n + i];
    }
    for (int i = 0; i < n; ++i) M[r * n + i] = col[i];
  }
  double mp[sym2_count(kMaxDim)] = {0};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) mp[sym2_index(n, i, j)] = 0.5 * (M[i * n + j] + M[j * n + i]);
  double eig[kMaxDim];
  sym_eigenvalues(n, mp, eig);
  *lo = eig[0]; *hi = eig[0];
  for (int i = 1; i < n; ++i) {
    if (eig[i] < *lo) *lo = eig[i];
    if (eig[i] > *hi) *hi = eig[i];
  }
}

// y_i = sum_j A_ij x_j for packed symmetric A.
inline void sym_matvec(int n, const double* a_packed, const double* x, double* y) {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a_packed[sym2_index(n, i, j)] * x[j];
    y[i] = s;
  }
}

}  // namespace imcf
