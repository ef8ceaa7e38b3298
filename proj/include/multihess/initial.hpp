#pragma once

#include "multihess/banded.hpp"
#include "multihess/generator.hpp"

#include <vector>

namespace multihess {

// C, scriptL and nu = (scriptL C)^{-T}. All p x p.
template <class R> struct InitialConditionData {
    int p = 1;
    Matrix<R> C;
    Matrix<R> scriptL;
    Matrix<R> nu_inv_t;  // nu^{-T} = scriptL * C, upper unitriangular
    Matrix<R> nu;        // lower unitriangular
    std::vector<R> nu_inv_top_row;  // first row of nu^{-T}: total masses

    // A^(a)_j initial value: nu[j][a-1]
    const R& initial(int j, int a) const { return nu[j][a - 1]; }
};

// scriptL from the factors L_1^[p-1] .. L_{p-1}^[p-1]; p x p, column k = L_1..L_{k-1} e_1 / d_k.
template <class R> Matrix<R> script_L(int p, const std::vector<R>& alpha);
template <class R> Matrix<R> script_L(const GeneratorSequence& gen);

// d_k = alpha_k alpha_{k+p} ... alpha_{k+(k-2)p}, k = 1..p (d_1 = 1)
template <class R> R script_L_scale(int p, const std::vector<R>& alpha, int k);

// Number of alphas needed by script_L.
std::size_t script_L_requirement(int p);

// Throws InvalidInput unless C is p x p, upper unitriangular, entries >= 0.
// `allow_negative` admits hypothesis-violating C (weights then carry no positivity guarantee).
template <class R> void validate_C(const Matrix<R>& C, int p, bool allow_negative = false);

template <class R> InitialConditionData<R> initial_conditions(int p, const std::vector<R>& alpha, const Matrix<R>& C,
                                                              bool allow_negative = false);
template <class R> InitialConditionData<R> initial_conditions(const GeneratorSequence& gen, const Matrix<R>& C,
                                                              bool allow_negative = false);
template <class R> InitialConditionData<R> initial_conditions(const GeneratorSequence& gen);

}  // namespace multihess
