#pragma once

#include "multihess/generator.hpp"
#include "multihess/initial.hpp"
#include "multihess/spectral.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace multihess {

// Type II: p subdiagonals and one superdiagonal. Type I: the transposed band.
enum class ChainKind { I, II };
std::string kind_name(ChainKind k);
ChainKind parse_kind(const std::string& s);

// P = Pi_1 ... Pi_p Upsilon with row-stochastic bidiagonal factors (finite, order N).
template <class R> struct StochasticFactors {
    int p = 1;
    int N = 0;
    std::vector<std::vector<R>> lower_sub;   // [a-1][i] = (Pi_a)_{i,i-1}, i >= 1
    std::vector<std::vector<R>> lower_diag;  // [a-1][i] = (Pi_a)_{i,i}
    std::vector<R> upper_diag;               // Upsilon_{i,i}
    std::vector<R> upper_super;              // Upsilon_{i,i+1}, i < N
    std::vector<R> pi;                       // similarity diagonal
    std::vector<std::vector<R>> D;           // [j-1] = diagonal of D_j, j = 1..p

    Matrix<R> product() const;
    // max |row sum - 1| over all factors, and the smallest entry that must be positive
    R max_row_deviation() const;
    R min_required_entry() const;
};

template <class R> struct StochasticBanded {
    ChainKind kind = ChainKind::II;
    int p = 1;
    int N = 0;              // rows 0..N
    bool semi = false;      // truncated view of the semi-infinite chain: rows 0..N, columns 0..N+p
    bool assumes_eta_one = false;
    Matrix<R> P;            // dense rows
    std::vector<R> pi_diag; // P = pi (T / scale) pi^{-1} (type II), P = pi^{-1} (T / scale)^T pi (type I)
    R scale = R(1);
    std::optional<StochasticFactors<R>> factors;

    R max_row_deviation() const;
    R min_entry() const;
    // entry of P; zero outside the stored block
    R operator()(int i, int j) const;
};

// Spectral data of T^[N] with the quantities the chain formulas need.
template <class R> struct ChainAnalysis {
    int p = 1;
    int N = 0;
    SpectralDecomposition<R> base;
    R lambda1 = R(0);
    Matrix<R> forms;          // forms[j][n] = sum_a A^(a)_n(lambda_j) mu_{j,a}
    std::vector<R> B_top;     // B_n(lambda_1), n = 0..N
    std::vector<R> pi_II;     // 1 / B_n(lambda_1)
    std::vector<R> pi_I;      // forms[0][n] / forms[0][0]
    std::vector<R> stationary;

    // Theta_{II,k,l} = B_l(lambda_1) / B_k(lambda_1)
    R theta(int k, int l) const { return B_top[l] / B_top[k]; }
};

template <class R> ChainAnalysis<R> analyze_chain(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N);

// Finite chains from the top eigenvalue of T^[N].
template <class R> StochasticBanded<R> monic_to_stochastic(const ChainAnalysis<R>& chain, const GeneratorSequence& gen,
                                                           ChainKind kind);
template <class R> StochasticBanded<R> monic_to_stochastic(const GeneratorSequence& gen, const InitialConditionData<R>& ic,
                                                           int N, ChainKind kind);

// Semi-infinite chains under the eta = 1 assumption; rows 0..rows.
// Type I needs the limits F_a (index a-2 for a = 2..p) for Omega_n = A^(1)_n(1) + sum_a F_a A^(a)_n(1).
template <class R> StochasticBanded<R> semi_stochastic_II(const GeneratorSequence& gen, int rows);
template <class R> StochasticBanded<R> semi_stochastic_I(const GeneratorSequence& gen, const InitialConditionData<R>& ic,
                                                         const std::vector<R>& F, int rows);

// Monic PBF (order N) to stochastic factors. The generator is rescaled by the top
// eigenvalue of T^[N] first; the scale is kept for the way back.
template <class R> StochasticBanded<R> to_stochastic(const GeneratorSequence& gen, int N);
template <class R> StochasticFactors<R> stochastic_factors(int p, const std::vector<R>& alpha, int N);

struct MonicResult {
    GeneratorSequence gen;  // alpha_1 .. alpha_{1+(p+1)N}, times scale
    double scale = 1;
};
template <class R> MonicResult to_monic(const StochasticFactors<R>& f, R scale = R(1));
// alphas of the normalized (top eigenvalue 1) matrix
template <class R> std::vector<R> monic_alphas(const StochasticFactors<R>& f);

// Karlin-McGregor n-step probability from k to l.
template <class R> R km_probability(const ChainAnalysis<R>& chain, int n, int k, int l, ChainKind kind);
// Row k of the n-step probabilities.
template <class R> std::vector<R> km_row(const ChainAnalysis<R>& chain, int n, int k, ChainKind kind);
// (P^n) row k by repeated vector-matrix products.
template <class R> std::vector<R> power_row(const StochasticBanded<R>& P, int n, int k);

template <class R> struct GeneratingValues {
    R P;  // P_kl(s)
    R F;  // F_kl(s)
};
template <class R> GeneratingValues<R> generating_functions(const ChainAnalysis<R>& chain, const R& s, int k, int l,
                                                            ChainKind kind);
// Truncated power series sum_{n <= n_max} (P^n)_kl s^n with tail bound |s|^{n_max+1} / (1 - |s|).
template <class R> struct SeriesCheck {
    R series = R(0);
    R tail_bound = R(0);
    int n_max = 0;
};
template <class R> SeriesCheck<R> generating_series(const StochasticBanded<R>& P, const R& s, int k, int l, double target);

// Spectral stationary vector; the same for both kinds.
template <class R> std::vector<R> stationary(const ChainAnalysis<R>& chain);
// B^[n+1]_{N+1}(lambda_1) B_n(lambda_1) / B'_{N+1}(lambda_1)
template <class R> std::vector<R> stationary_from_tables(const ChainAnalysis<R>& chain);

enum class Classification { Recurrent, Transient, Inconclusive };
std::string classification_name(Classification c);

struct FiniteRecurrence {
    int state = 0;
    std::vector<double> s;       // 1 - 10^-m
    std::vector<double> F;       // F_ll(s)
    bool monotone = false;
    double gap_at_last = 0;      // 1 - F_ll at the last s
};

struct RecurrenceReport {
    std::string mode;  // "finite" or "semi"
    Classification classification = Classification::Inconclusive;
    bool heuristic = false;
    bool assumes_eta_one = false;
    std::vector<FiniteRecurrence> finite;  // per state

    // semi mode trends over the N list
    std::vector<int> orders;
    std::vector<double> integral;                // sum_k mu_{k,1} / (1 - lambda_k)
    std::vector<double> top_eigenvalue;
    std::vector<std::vector<double>> masses;     // [i][a-1] = B^(a)_{N+1}(1) / B'_{N+1}(1)
    std::vector<std::vector<double>> F_ratios;   // [i][a-2] = mu_{1,a} / mu_{1,1}
    bool ergodic = false;
    std::vector<double> stationary;              // pi_{n+1} = (sum_a A^(a)_n(1) m_a) B_n(1)
    double stationary_partial_sum = 0;
    bool stable_under_doubling = false;
    std::string note;
};

template <class R>
RecurrenceReport recurrence_finite(const ChainAnalysis<R>& chain, int m_max = 8);
template <class R>
RecurrenceReport recurrence_semi(const GeneratorSequence& gen, const InitialConditionData<R>& ic, const std::vector<int>& orders,
                                 int stationary_terms = 20);

// CSV with a header line "# kind=II p=2 N=10" then "i,j,value" rows of the nonzero band.
template <class R> void write_stochastic_csv(std::ostream& os, const StochasticBanded<R>& P);
StochasticBanded<double> read_stochastic_csv(std::istream& is);

}  // namespace multihess
