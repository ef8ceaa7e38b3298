#pragma once

#include "multihess/banded.hpp"
#include "multihess/generator.hpp"
#include "multihess/initial.hpp"

#include <vector>

namespace multihess {

// Recurrence functions take a band of sufficient order; the required order is checked.
// V is the value type (R, or std::complex<double> for off-axis evaluation).

template <class V> struct TypeIIValues {
    std::vector<V> B;   // B_0 .. B_n
    std::vector<V> dB;  // derivatives
};

// B_0..B_{n_max}; needs T.order() >= n_max - 1.
template <class R, class V> TypeIIValues<V> eval_type_II(const BandedHessenberg<R>& T, const V& x, int n_max);

// A[a-1][n] = A^(a)_n(x), n = 0..n_max; needs n_max >= p-1 and T.order() >= n_max.
template <class R, class V>
Matrix<V> eval_type_I(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, const V& x, int n_max);

// B^[k]_{N+1}(x), k = 0..N+1; uses rows 0..N of T.
template <class R, class V> std::vector<V> eval_truncated(const BandedHessenberg<R>& T, int N, const V& x);

// [B^(1)_{N+1} .. B^(p)_{N+1}] = [B^[1] .. B^[p]] nu^{-T} (B^[j] = 0 for j > N+1).
template <class R, class V>
std::vector<V> second_kind(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int N, const V& x);

// Q_{n,N}(x) = det[A_n; A_{N+1}; ...; A_{N+p-1}] (rows are (A^(1)_m .. A^(p)_m)).
// Needs T.order() >= N + p - 1. `perm_scale` receives the permanent of |entries|.
template <class R, class V>
V q_determinant(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int n, int N, const V& x,
                R* perm_scale = nullptr);

// Residuals of the Christoffel-Darboux identities and their magnitude scales.
template <class R> struct CdReport {
    R cd2 = 0, cd1 = 0, cd2_confluent = 0, cd1_confluent = 0;
    R scale_cd2 = 0, scale_cd1 = 0, scale_cd2_confluent = 0, scale_cd1_confluent = 0;
    // max over the four of residual / scale
    R worst_relative() const;
};

// Needs T.order() >= N + p. x != y (throws InvalidInput).
template <class R>
CdReport<R> verify_cd(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int N, const R& x, const R& y);

// |B_n(x) - h_n det[A^(a)_{n+r}]| / scale at x; needs T.order() >= n + p - 1.
template <class R> struct DeterminantalResidual {
    R residual = 0;
    R scale = 0;
};
template <class R>
DeterminantalResidual<R> verify_determinantal(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int n,
                                              const R& x);

// Everything at one point for a truncation order N.
template <class R> struct PolynomialEvaluation {
    R x;
    std::vector<R> typeII, typeII_deriv;  // n = 0..N+1
    Matrix<R> typeI;                       // [a-1][n], n = 0..N+p-1
    std::vector<R> truncated;              // k = 0..N+1
    std::vector<R> second_kind;            // a = 1..p
    std::vector<R> h;                      // h_0 .. h_{N+1}
};

template <class R>
PolynomialEvaluation<R> evaluate_all(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N,
                                     const R& x);

}  // namespace multihess
