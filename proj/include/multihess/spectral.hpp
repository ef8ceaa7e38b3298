#pragma once

#include "multihess/banded.hpp"
#include "multihess/generator.hpp"
#include "multihess/initial.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace multihess {

// Roots of B_1 .. B_{N+1} for the leading blocks of T, level by level.
template <class R> struct EigenLevels {
    std::vector<std::vector<R>> roots;  // roots[n]: eigenvalues of T^[n], descending
    int count_fallbacks = 0;             // brackets resolved by sign-count bisection
    int interlace_ties = 0;              // computed interlacing not strict
    R min_interlace_gap = 0;             // min over levels of the gap between a root and its bracket ends
    R min_level_gap = 0;                 // min gap between adjacent roots of one level

    const std::vector<R>& top() const { return roots.back(); }
};

// Level bootstrap on a banded Hessenberg whose leading blocks are oscillatory.
template <class R> EigenLevels<R> eigen_levels(const BandedHessenberg<R>& T);

// N+1 eigenvalues of T^[N], descending.
template <class R> std::vector<R> eigenvalues(const GeneratorSequence& gen, int N);

template <class R> struct SpectralDecomposition {
    int p = 1;
    int N = 0;
    std::vector<R> lambda;  // descending
    Matrix<R> right;        // right[k][n] = B_n(lambda_k), n = 0..N
    Matrix<R> left;         // left[k][n-1] = w_{k,n} = B^[n]_{N+1}(lambda_k) / B'_{N+1}(lambda_k)
    std::vector<R> dB;      // B'_{N+1}(lambda_k) by derivative recurrence
    Matrix<R> mu;           // mu[k][a-1]
    // bootstrap diagnostics
    int count_fallbacks = 0;
    int interlace_ties = 0;
    R min_interlace_gap = 0;
    R min_level_gap = 0;
    // max |UW - I| over the internal tables
    R uw_residual = 0;
};

template <class R>
SpectralDecomposition<R> decomposition(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N);

// Christoffel weights from the factor-product formula; mu_tilde[k][j-1] before applying C.
template <class R> Matrix<R> christoffel_unscaled(int p, const std::vector<R>& alpha, int N, const std::vector<R>& lambda);

template <class R> struct PositivityReport {
    bool positive = false;
    R min_weight = 0;
    bool hypothesis_holds = true;  // C nonnegative upper unitriangular
};
template <class R> PositivityReport<R> verify_positivity(const GeneratorSequence& gen, const Matrix<R>& C, int N);

// max_{k,l} |<sum_a A^(a)_k mu_a, B_l> - delta_kl| over the nodes.
template <class R> R verify_biorthogonality(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N);
template <class R> R biorthogonality_residual(const GeneratorSequence& gen, const InitialConditionData<R>& ic,
                                              const SpectralDecomposition<R>& sd);

template <class V> struct WeylValues {
    V ratio;      // B^(a)_{N+1}(z) / B_{N+1}(z), the returned value
    V partial;    // sum_k mu_{k,a} / (z - lambda_k)
    V resolvent;  // e_1^T (zI - T^[N])^{-1} e^nu_a
    double max_rel_diff = 0;
};

template <class R, class V>
WeylValues<V> weyl(const GeneratorSequence& gen, const InitialConditionData<R>& ic, const SpectralDecomposition<R>& sd,
                   int a, const V& z);

template <class R> struct MomentValue {
    R matrix;    // e_1^T (T^[N])^n e^nu_a, canonical
    R spectral;  // sum_k mu_{k,a} lambda_k^n
    R rel_diff = 0;
};

template <class R>
MomentValue<R> moments(const GeneratorSequence& gen, const InitialConditionData<R>& ic, const SpectralDecomposition<R>& sd,
                       int n, int a);

// Column a of nu^{-T}, embedded into length `size` (truncated if size < p).
template <class R> std::vector<R> embedded_nu_column(const InitialConditionData<R>& ic, int a, int size);

// Step functions psi_a(x) = sum_{lambda_k <= x} mu_{k,a}.
template <class R> struct DiscreteMeasureSet {
    std::vector<R> nodes;
    Matrix<R> weights;  // weights[a-1][k]
    std::vector<R> total_mass;
    R psi(int a, const R& x) const;
};
template <class R> DiscreteMeasureSet<R> measures(const SpectralDecomposition<R>& sd);

// Sign changes of a vector: v_min ignores zeros, v_max assigns zeros the most favourable sign.
// Entries below zero_tol * max|v| count as zeros.
struct SignChanges {
    int v_min = 0;
    int v_max = 0;
};
template <class R> SignChanges sign_changes(const std::vector<R>& v, double zero_tol = 1e-12);

// Sequence limit estimate with Cauchy-style stopping |v(N) - v(2N)| < tol.
struct LimitEstimate {
    enum class Status { Converged, Inconclusive };
    Status status = Status::Inconclusive;
    double value = 0;
    std::vector<int> orders;
    std::vector<double> values;
};
LimitEstimate estimate_limit(const std::function<double(int)>& f, int N0, double tol, int N_max);
std::string limit_status_name(LimitEstimate::Status s);

}  // namespace multihess
