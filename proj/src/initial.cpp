#include "multihess/initial.hpp"

#include "multihess/errors.hpp"
#include "multihess/linalg.hpp"
#include "multihess/real.hpp"

#include <algorithm>
#include <string>

namespace multihess {

std::size_t script_L_requirement(int p) {
    if (p <= 1) return 1;
    const long a = static_cast<long>(p) * p - 2;  // last subdiagonal alpha of L_{p-1}^[p-1]
    const long b = static_cast<long>(p) * p - p;  // last factor of d_p
    return static_cast<std::size_t>(std::max({a, b, 1L}));
}

template <class R> R script_L_scale(int p, const std::vector<R>& alpha, int k) {
    R d(1);
    for (int i = 0; i <= k - 2; ++i) d *= alpha[static_cast<std::size_t>(k + i * p - 1)];
    return d;
}

template <class R> Matrix<R> script_L(int p, const std::vector<R>& alpha) {
    if (p < 1) throw InvalidInput("p: must be positive");
    if (alpha.size() < script_L_requirement(p))
        throw InvalidInput("generator too short: " + std::to_string(script_L_requirement(p)) +
                           " alphas required for scriptL");
    Matrix<R> L(p, std::vector<R>(p, R(0)));
    for (int k = 1; k <= p; ++k) {
        std::vector<R> v(p, R(0));
        v[0] = R(1);
        for (int m = k - 1; m >= 1; --m)
            for (int j = p - 1; j >= 1; --j)
                v[j] += alpha[static_cast<std::size_t>(m + (j - 1) * (p + 1))] * v[j - 1];  // (L_m)_{j,j-1}
        const R d = script_L_scale(p, alpha, k);
        for (int j = 0; j < p; ++j) L[j][k - 1] = v[j] / d;
    }
    return L;
}

template <class R> Matrix<R> script_L(const GeneratorSequence& gen) {
    return script_L<R>(gen.p(), alpha_vector<R>(gen, script_L_requirement(gen.p())));
}

template <class R> void validate_C(const Matrix<R>& C, int p, bool allow_negative) {
    if (static_cast<int>(C.size()) != p) throw InvalidInput("C: expected " + std::to_string(p) + " rows");
    for (int i = 0; i < p; ++i) {
        if (static_cast<int>(C[i].size()) != p) throw InvalidInput("C: row " + std::to_string(i) + " has wrong length");
        for (int j = 0; j < p; ++j) {
            const R& c = C[i][j];
            if (i == j && c != R(1)) throw InvalidInput("C: diagonal entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be 1");
            if (i > j && c != R(0)) throw InvalidInput("C: entry (" + std::to_string(i) + "," + std::to_string(j) + ") below the diagonal must be 0");
            if (i < j && c < R(0) && !allow_negative)
                throw InvalidInput("C: entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be >= 0");
        }
    }
}

template <class R> InitialConditionData<R> initial_conditions(int p, const std::vector<R>& alpha, const Matrix<R>& C,
                                                              bool allow_negative) {
    validate_C(C, p, allow_negative);
    InitialConditionData<R> ic;
    ic.p = p;
    ic.C = C;
    ic.scriptL = script_L<R>(p, alpha);
    ic.nu_inv_t = linalg::multiply(ic.scriptL, C);
    ic.nu = linalg::transpose(linalg::unit_upper_inverse(ic.nu_inv_t));
    ic.nu_inv_top_row = ic.nu_inv_t[0];
    return ic;
}

template <class R> InitialConditionData<R> initial_conditions(const GeneratorSequence& gen, const Matrix<R>& C,
                                                              bool allow_negative) {
    return initial_conditions<R>(gen.p(), alpha_vector<R>(gen, script_L_requirement(gen.p())), C, allow_negative);
}

template <class R> InitialConditionData<R> initial_conditions(const GeneratorSequence& gen) {
    return initial_conditions<R>(gen, linalg::identity<R>(static_cast<std::size_t>(gen.p())));
}

#define MULTIHESS_INSTANTIATE(R)                                                                               \
    template R script_L_scale<R>(int, const std::vector<R>&, int);                                             \
    template Matrix<R> script_L<R>(int, const std::vector<R>&);                                                \
    template Matrix<R> script_L<R>(const GeneratorSequence&);                                                  \
    template void validate_C<R>(const Matrix<R>&, int, bool);                                                  \
    template InitialConditionData<R> initial_conditions<R>(int, const std::vector<R>&, const Matrix<R>&, bool); \
    template InitialConditionData<R> initial_conditions<R>(const GeneratorSequence&, const Matrix<R>&, bool);  \
    template InitialConditionData<R> initial_conditions<R>(const GeneratorSequence&);

MULTIHESS_INSTANTIATE(double)
MULTIHESS_INSTANTIATE(extended)

}  // namespace multihess
