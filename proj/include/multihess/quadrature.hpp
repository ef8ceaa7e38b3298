#pragma once

#include "multihess/generator.hpp"
#include "multihess/initial.hpp"
#include "multihess/spectral.hpp"

#include <vector>

namespace multihess {

// d_a = n - 1 + ceil((n + 1 - a) / p) for an n-node rule.
int precision_degree(int node_count, int p, int a);

// Smallest truncation order M with precision_degree(M + 1, p, a) >= n.
int reference_order(int n, int p, int a);

template <class R> struct QuadratureRule {
    int measure = 1;
    int node_count = 0;
    int precision = 0;
    std::vector<R> nodes;    // descending
    std::vector<R> weights;  // mu_{k,a}

    // sum_k w_k x_k^n
    R monomial(int n) const;
};

template <class R> QuadratureRule<R> rule_from(const SpectralDecomposition<R>& sd, int a);
template <class R>
QuadratureRule<R> gauss_rule(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N, int a);

// e_1^T T^n e^nu_a on the truncation of order M (defaults to reference_order).
template <class R>
R reference_moment(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int n, int a, int M = -1);

struct SharpnessReport {
    int measure = 1;
    int node_count = 0;
    int precision = 0;          // formula value
    int exact_through = -1;     // from the remainder recursion
    double remainder_at_next = 0;
    // rule sum against reference_moment with |diff| <= 1e-9 max(1, |ref|)
    int scan_exact_through = -1;
    double max_scaled_diff = 0;  // over n <= precision
    bool rule_matches_reference = false;

    bool consistent() const { return exact_through == precision && remainder_at_next > 0; }
};

// Remainder r_n = e_1^T (T^n - (T^[N])^n) e^nu_a is computed from the nonnegative recursion
// r_{k+1} = T r_k + s_k, s_k = rows > N of T (g_k, 0), g_{k+1} = T^[N] g_k, g_0 = e^nu_a,
// so exactness shows up as an exact zero and no cancellation occurs.
template <class R>
SharpnessReport sharpness_check(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N, int a,
                                int extra_powers = 1);

}  // namespace multihess
