#include "multihess/quadrature.hpp"

#include "multihess/errors.hpp"
#include "multihess/kernels.hpp"
#include "multihess/real.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace multihess {

int precision_degree(int node_count, int p, int a) {
    if (p < 1) throw InvalidInput("p: must be positive");
    if (a < 1 || a > p) throw InvalidInput("measure index a=" + std::to_string(a) + " outside 1.." + std::to_string(p));
    if (node_count < 1) throw InvalidInput("node count must be >= 1");
    const int num = node_count + 1 - a;
    const int ceil = (num + p - 1) / p;  // num >= 1 since a <= p <= ... and node_count >= 1
    return node_count - 1 + ceil;
}

int reference_order(int n, int p, int a) {
    if (n < 0) throw InvalidInput("moment power n must be >= 0");
    int M = 0;
    while (precision_degree(M + 1, p, a) < n) ++M;
    return M;
}

template <class R> R QuadratureRule<R>::monomial(int n) const {
    R s(0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        R pw(1);
        for (int i = 0; i < n; ++i) pw *= nodes[k];
        s += weights[k] * pw;
    }
    return s;
}

template <class R> QuadratureRule<R> rule_from(const SpectralDecomposition<R>& sd, int a) {
    if (a < 1 || a > sd.p) throw InvalidInput("measure index a outside 1..p");
    QuadratureRule<R> q;
    q.measure = a;
    q.node_count = sd.N + 1;
    q.precision = precision_degree(q.node_count, sd.p, a);
    q.nodes = sd.lambda;
    for (const auto& row : sd.mu) q.weights.push_back(row[a - 1]);
    return q;
}

template <class R>
QuadratureRule<R> gauss_rule(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N, int a) {
    return rule_from(decomposition(gen, ic, N), a);
}

template <class R>
R reference_moment(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int n, int a, int M) {
    const int p = gen.p();
    if (a < 1 || a > p) throw InvalidInput("measure index a outside 1..p");
    if (M < 0) M = reference_order(n, p, a);
    const std::size_t need = gen.required_for(M);
    if (gen.length() && *gen.length() < need)
        throw InvalidInput("generator too short: moment n=" + std::to_string(n) + " needs truncation order M=" +
                           std::to_string(M) + " (" + std::to_string(need) + " alphas)");
    const auto T = assemble_truncation<R>(gen, M);
    auto y = embedded_nu_column(ic, a, M + 1);
    std::vector<R> z(y.size());
    for (int i = 0; i < n; ++i) {
        kernels::matvec(T, y.data(), z.data());
        std::swap(y, z);
    }
    return y[0];
}

template <class R>
SharpnessReport sharpness_check(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N, int a,
                                int extra_powers) {
    using std::abs;
    const int p = gen.p();
    SharpnessReport rep;
    rep.measure = a;
    rep.node_count = N + 1;
    rep.precision = precision_degree(N + 1, p, a);
    const int K = rep.precision + std::max(extra_powers, 1);

    // remainder recursion on a truncation deep enough for K powers
    const int M = N + K * p + 1;
    const auto TM = assemble_truncation<R>(gen, M);
    const auto TN = TM.leading(N);
    std::vector<R> g = embedded_nu_column(ic, a, N + 1), gn(g.size());
    // e^nu_a may be longer than the truncation; its tail starts the remainder
    std::vector<R> r = embedded_nu_column(ic, a, M + 1), rn(r.size());
    std::fill(r.begin(), r.begin() + (N + 1), R(0));
    std::vector<R> full(static_cast<std::size_t>(M + 1), R(0)), tg(full.size());
    std::vector<R> rem(static_cast<std::size_t>(K + 1), R(0));
    rem[0] = r[0];
    for (int k = 0; k < K; ++k) {
        kernels::matvec(TM, r.data(), rn.data());
        std::fill(full.begin(), full.end(), R(0));
        std::copy(g.begin(), g.end(), full.begin());
        kernels::matvec(TM, full.data(), tg.data());
        for (int i = N + 1; i <= M; ++i) rn[i] += tg[i];
        kernels::matvec(TN, g.data(), gn.data());
        std::swap(r, rn);
        std::swap(g, gn);
        rem[k + 1] = r[0];
    }
    rep.exact_through = K;
    for (int n = 0; n <= K; ++n)
        if (rem[n] != R(0)) {
            rep.exact_through = n - 1;
            break;
        }
    if (rep.exact_through + 1 <= K) rep.remainder_at_next = to_double(rem[rep.exact_through + 1]);

    // rule against the independent reference
    const auto rule = gauss_rule(gen, ic, N, a);
    rep.scan_exact_through = -1;
    bool scanning = true;
    rep.rule_matches_reference = true;
    for (int n = 0; n <= K; ++n) {
        const R ref = reference_moment(gen, ic, n, a);
        const R diff = abs(rule.monomial(n) - ref);
        const R scale = std::max(R(1), R(abs(ref)));
        const double scaled = to_double(R(diff / scale));
        const bool ok = scaled <= 1e-9;
        if (scanning && ok) rep.scan_exact_through = n;
        else scanning = false;
        if (n <= rep.precision) {
            rep.max_scaled_diff = std::max(rep.max_scaled_diff, scaled);
            if (!ok) rep.rule_matches_reference = false;
        }
    }
    return rep;
}

#define MULTIHESS_INSTANTIATE(R)                                                                                 \
    template struct QuadratureRule<R>;                                                                           \
    template QuadratureRule<R> rule_from<R>(const SpectralDecomposition<R>&, int);                               \
    template QuadratureRule<R> gauss_rule<R>(const GeneratorSequence&, const InitialConditionData<R>&, int, int); \
    template R reference_moment<R>(const GeneratorSequence&, const InitialConditionData<R>&, int, int, int);     \
    template SharpnessReport sharpness_check<R>(const GeneratorSequence&, const InitialConditionData<R>&, int, int, int);

MULTIHESS_INSTANTIATE(double)
MULTIHESS_INSTANTIATE(extended)

}  // namespace multihess
