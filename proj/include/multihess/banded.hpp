#pragma once

#include "multihess/generator.hpp"

#include <cstddef>
#include <vector>

namespace multihess {

template <class R> using Matrix = std::vector<std::vector<R>>;

// Lower Hessenberg with p subdiagonals and unit superdiagonal, order N (size N+1).
// Storage: diag(d)[i] = T_{i,i-d} for d = 0..p, zero-padded for i < d.
template <class R> class BandedHessenberg {
public:
    BandedHessenberg() = default;
    BandedHessenberg(int p, int N) : p_(p), N_(N), diag_(p + 1, std::vector<R>(N + 1, R(0))) {}

    int p() const { return p_; }
    int order() const { return N_; }
    int size() const { return N_ + 1; }

    // T_{i,i-d}
    const R& sub(int i, int d) const { return diag_[d][i]; }
    R& sub(int i, int d) { return diag_[d][i]; }
    const std::vector<R>& diag(int d) const { return diag_[d]; }

    R operator()(int i, int j) const {
        if (j == i + 1) return R(1);
        const int d = i - j;
        if (d < 0 || d > p_) return R(0);
        return diag_[d][i];
    }

    // T_{n+p,n}
    const R& lowest(int n) const { return diag_[p_][n + p_]; }

    BandedHessenberg leading(int n) const;
    // delete the first k rows and columns
    BandedHessenberg trailing(int k = 1) const;
    // max_i sum_j |T_ij|, including the unit superdiagonal inside the block
    R max_row_sum() const;
    Matrix<R> dense() const;

    template <class S> BandedHessenberg<S> convert() const {
        BandedHessenberg<S> out(p_, N_);
        for (int d = 0; d <= p_; ++d)
            for (int i = 0; i <= N_; ++i) out.sub(i, d) = S(diag_[d][i]);
        return out;
    }

private:
    int p_ = 0;
    int N_ = -1;
    std::vector<std::vector<R>> diag_;
};

// Bidiagonal factors of a truncation: lower[k-1][j] = (L_k)_{j,j-1} (j >= 1), upper[j] = U_{j,j}.
template <class R> struct BidiagonalFactors {
    int p = 0;
    int N = 0;
    std::vector<std::vector<R>> lower;
    std::vector<R> upper;
};

// alpha is 0-based storage of alpha_1.. (alpha[i-1] = alpha_i).
template <class R> BidiagonalFactors<R> bidiagonal_factors(int p, const std::vector<R>& alpha, int N);

// T^[N] = L_1 ... L_p U, built row by row from the factors.
template <class R> BandedHessenberg<R> assemble(int p, const std::vector<R>& alpha, int N);
template <class R> BandedHessenberg<R> assemble_truncation(const GeneratorSequence& gen, int N);

// T_{i,j} of the semi-infinite matrix, same arithmetic as assemble.
double entry(const GeneratorSequence& gen, int i, int j);

// L_{k+1} ... L_p U L_1 ... L_k with truncated factors, 1 <= k <= p.
template <class R> BandedHessenberg<R> darboux(int p, const std::vector<R>& alpha, int N, int k);
template <class R> BandedHessenberg<R> darboux(const GeneratorSequence& gen, int N, int k);

// Product of the factors in the given cyclic order starting at L_{k+1}; k = 0 gives T itself.
// Used by the weight computation, which needs k = 0..p-1.
template <class R> BandedHessenberg<R> cyclic_product(int p, const std::vector<R>& alpha, int N, int k);

// H_n = prod_{i<n} T_{p+i,i}; h_n = (-1)^{(p-1)n} H_n. Needs order >= n-1+p.
template <class R> R subdiagonal_product(const BandedHessenberg<R>& T, int n);
template <class R> R signed_subdiagonal_product(const BandedHessenberg<R>& T, int n);

// y = T x and y = x T for a banded matrix (scalar reference; see kernels.hpp for dispatch)
template <class R> void band_matvec_ref(const BandedHessenberg<R>& T, const R* x, R* y);
template <class R> void band_vecmat_ref(const BandedHessenberg<R>& T, const R* x, R* y);

}  // namespace multihess
