#pragma once

#include "multihess/banded.hpp"
#include "multihess/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace multihess::linalg {

template <class R> Matrix<R> identity(std::size_t n) {
    Matrix<R> I(n, std::vector<R>(n, R(0)));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = R(1);
    return I;
}

template <class R> Matrix<R> transpose(const Matrix<R>& A) {
    if (A.empty()) return {};
    Matrix<R> B(A[0].size(), std::vector<R>(A.size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[0].size(); ++j) B[j][i] = A[i][j];
    return B;
}

template <class R> Matrix<R> multiply(const Matrix<R>& A, const Matrix<R>& B) {
    const std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    Matrix<R> C(n, std::vector<R>(m, R(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
    return C;
}

template <class V> V abs_value(const V& x) {
    using std::abs;
    return abs(x);
}
template <class T> T abs_value(const std::complex<T>& x) { return std::abs(x); }

// Determinant by Gaussian elimination with partial pivoting.
template <class V> V determinant(Matrix<V> A) {
    const std::size_t n = A.size();
    V det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        auto best = abs_value(A[c][c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const auto v = abs_value(A[r][c]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0) return V(0);
        if (piv != c) { std::swap(A[piv], A[c]); det = -det; }
        det *= A[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const V f = A[r][c] / A[c][c];
            if (f == V(0)) continue;
            for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
        }
    }
    return det;
}

// Sum over permutations of |prod A_{i,s(i)}|: the magnitude scale of a determinant expansion.
template <class V> auto permanent_abs(const Matrix<V>& A) -> decltype(abs_value(A[0][0])) {
    using M = decltype(abs_value(A[0][0]));
    const std::size_t n = A.size();
    if (n == 0) return M(1);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    M total(0);
    do {
        M prod(1);
        for (std::size_t i = 0; i < n; ++i) prod *= abs_value(A[i][perm[i]]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Inverse of an upper unitriangular matrix by back substitution.
template <class R> Matrix<R> unit_upper_inverse(const Matrix<R>& U) {
    const std::size_t n = U.size();
    Matrix<R> X = identity<R>(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = c; i-- > 0;) {
            R s(0);
            for (std::size_t k = i + 1; k <= c; ++k) s += U[i][k] * X[k][c];
            X[i][c] = -s;
        }
    return X;
}

// Solve A x = b (dense, partial pivoting).
template <class V> std::vector<V> solve(Matrix<V> A, std::vector<V> b) {
    const std::size_t n = A.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        auto best = abs_value(A[c][c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const auto v = abs_value(A[r][c]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0) throw NumericError("singular", "singular matrix in dense solve");
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const V f = A[r][c] / A[c][c];
            for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
            b[r] -= f * b[c];
        }
    }
    std::vector<V> x(n);
    for (std::size_t i = n; i-- > 0;) {
        V s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

// Solve (z I - T) x = b for a banded Hessenberg T. Partial pivoting within the band:
// p subdiagonals, superdiagonal widened by fill to p + 1.
template <class V, class R> std::vector<V> shifted_band_solve(const BandedHessenberg<R>& T, const V& z,
                                                              std::vector<V> b) {
    const int n = T.size();
    const int p = T.p();
    const int kl = p, ku = 1 + p;
    const int width = kl + ku + 1;
    // row-major band: W[i][j - i + kl]
    std::vector<std::vector<V>> W(static_cast<std::size_t>(n), std::vector<V>(static_cast<std::size_t>(width), V(0)));
    auto at = [&](int i, int j) -> V& { return W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i + kl)]; };
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - p); j <= std::min(n - 1, i + 1); ++j) at(i, j) = (i == j ? z : V(0)) - V(T(i, j));
    for (int c = 0; c < n; ++c) {
        int piv = c;
        auto best = abs_value(at(c, c));
        const int last = std::min(n - 1, c + kl);
        for (int r = c + 1; r <= last; ++r) {
            const auto v = abs_value(at(r, c));
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0) throw NumericError("pole", "shifted banded system is singular");
        const int jmax = std::min(n - 1, c + ku);
        if (piv != c) {
            for (int j = c; j <= jmax; ++j) std::swap(at(piv, j), at(c, j));
            std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(c)]);
        }
        for (int r = c + 1; r <= last; ++r) {
            const V f = at(r, c) / at(c, c);
            if (f == V(0)) continue;
            for (int j = c; j <= jmax; ++j) at(r, j) -= f * at(c, j);
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
        }
    }
    std::vector<V> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        V s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= std::min(n - 1, i + ku); ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    return x;
}

}  // namespace multihess::linalg
