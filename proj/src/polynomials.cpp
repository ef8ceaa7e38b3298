#include "multihess/polynomials.hpp"

#include "multihess/errors.hpp"
#include "multihess/linalg.hpp"
#include "multihess/real.hpp"

#include <algorithm>
#include <complex>
#include <string>

namespace multihess {

namespace {

template <class R> void need_order(const BandedHessenberg<R>& T, int order, const char* what) {
    if (T.order() < order)
        throw InvalidInput(std::string(what) + ": band of order >= " + std::to_string(order) + " required, got " +
                           std::to_string(T.order()));
}

}  // namespace

template <class R, class V> TypeIIValues<V> eval_type_II(const BandedHessenberg<R>& T, const V& x, int n_max) {
    if (n_max < 0) throw InvalidInput("eval_type_II: n_max must be >= 0");
    need_order(T, n_max - 1, "eval_type_II");
    const int p = T.p();
    TypeIIValues<V> out;
    out.B.assign(static_cast<std::size_t>(n_max + 1), V(0));
    out.dB.assign(static_cast<std::size_t>(n_max + 1), V(0));
    out.B[0] = V(1);
    for (int n = 0; n < n_max; ++n) {
        const V t = x - V(T.sub(n, 0));
        V b = t * out.B[n];
        V d = t * out.dB[n];
        d = d + out.B[n];
        for (int k = 1; k <= p && k <= n; ++k) {
            b = b - V(T.sub(n, k)) * out.B[n - k];
            d = d - V(T.sub(n, k)) * out.dB[n - k];
        }
        out.B[n + 1] = b;
        out.dB[n + 1] = d;
    }
    return out;
}

template <class R, class V>
Matrix<V> eval_type_I(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, const V& x, int n_max) {
    const int p = T.p();
    if (ic.p != p) throw InvalidInput("eval_type_I: initial conditions built for a different p");
    if (n_max < p - 1) throw InvalidInput("eval_type_I: n_max must be >= p-1");
    need_order(T, n_max, "eval_type_I");
    Matrix<V> A(static_cast<std::size_t>(p), std::vector<V>(static_cast<std::size_t>(n_max + 1), V(0)));
    for (int a = 1; a <= p; ++a) {
        auto& row = A[a - 1];
        for (int j = 0; j < p; ++j) row[j] = V(ic.initial(j, a));
        for (int n = 0; n + p <= n_max; ++n) {
            V s = x * row[n];
            if (n > 0) s = s - row[n - 1];
            for (int i = 0; i < p; ++i) s = s - V(T.sub(n + i, i)) * row[n + i];
            row[n + p] = s / V(T.lowest(n));
        }
    }
    return A;
}

template <class R, class V> std::vector<V> eval_truncated(const BandedHessenberg<R>& T, int N, const V& x) {
    if (N < 0) throw InvalidInput("eval_truncated: N must be >= 0");
    need_order(T, N, "eval_truncated");
    const int p = T.p();
    // index k holds B^[k]; zero seeds above N+1
    std::vector<V> Bt(static_cast<std::size_t>(N + 2 + p), V(0));
    Bt[N + 1] = V(1);
    for (int k = N; k >= 0; --k) {
        V s = x * Bt[k + 1];
        for (int j = k; j <= std::min(k + p, N); ++j) s = s - V(T.sub(j, j - k)) * Bt[j + 1];
        Bt[k] = s;
    }
    Bt.resize(static_cast<std::size_t>(N + 2));
    return Bt;
}

template <class R, class V>
std::vector<V> second_kind(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int N, const V& x) {
    const int p = T.p();
    const auto Bt = eval_truncated(T, N, x);
    std::vector<V> out(static_cast<std::size_t>(p), V(0));
    for (int a = 0; a < p; ++a)
        for (int j = 1; j <= p; ++j)
            if (j <= N + 1) out[a] += Bt[j] * V(ic.nu_inv_t[j - 1][a]);
    return out;
}

template <class R, class V>
V q_determinant(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int n, int N, const V& x,
                R* perm_scale) {
    const int p = T.p();
    const int top = std::max(n, N + p - 1);
    const auto A = eval_type_I(T, ic, x, std::max(top, p - 1));
    Matrix<V> M(static_cast<std::size_t>(p), std::vector<V>(static_cast<std::size_t>(p)));
    for (int a = 0; a < p; ++a) M[0][a] = A[a][n];
    for (int r = 1; r < p; ++r)
        for (int a = 0; a < p; ++a) M[r][a] = A[a][N + r];
    if (perm_scale) *perm_scale = R(linalg::permanent_abs(M));
    return linalg::determinant(M);
}

template <class R> R CdReport<R>::worst_relative() const {
    auto rel = [](const R& r, const R& s) { return s > 0 ? R(r / s) : r; };
    return std::max({rel(cd2, scale_cd2), rel(cd1, scale_cd1), rel(cd2_confluent, scale_cd2_confluent),
                     rel(cd1_confluent, scale_cd1_confluent)});
}

template <class R>
CdReport<R> verify_cd(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int N, const R& x, const R& y) {
    using std::abs;
    if (x == y) throw InvalidInput("verify_cd: x == y; the non-confluent forms need distinct points");
    const int p = T.p();
    need_order(T, N + p, "verify_cd");
    const auto Bx = eval_type_II(T, x, N + 1);
    const auto By = eval_type_II(T, y, N + 1);
    const auto Ax = eval_type_I(T, ic, x, N + p);
    const auto Tx = eval_truncated(T, N, x);
    const R hN = signed_subdiagonal_product(T, N);

    auto q_at = [&](const Matrix<R>& A, int n, R& scale) {
        Matrix<R> M(static_cast<std::size_t>(p), std::vector<R>(static_cast<std::size_t>(p)));
        for (int a = 0; a < p; ++a) M[0][a] = A[a][n];
        for (int r = 1; r < p; ++r)
            for (int a = 0; a < p; ++a) M[r][a] = A[a][N + r];
        scale = linalg::permanent_abs(M);
        return linalg::determinant(M);
    };

    CdReport<R> rep;
    // CD2 and its confluent form (both at x)
    R s2(0), s2c(0), sc2(0), sc2c(0);
    R s1(0), s1c(0), sc1(0), sc1c(0);
    for (int n = 0; n <= N; ++n) {
        R qs;
        const R q = q_at(Ax, n, qs);
        s2 += q * By.B[n];
        s2c += q * Bx.B[n];
        sc2 = std::max(sc2, R(qs * abs(By.B[n])));
        sc2c = std::max(sc2c, R(qs * abs(Bx.B[n])));
        s1 += Tx[n + 1] * By.B[n];
        s1c += Tx[n + 1] * Bx.B[n];
        sc1 = std::max(sc1, R(abs(Tx[n + 1] * By.B[n])));
        sc1c = std::max(sc1c, R(abs(Tx[n + 1] * Bx.B[n])));
    }
    const R dxy = x - y;
    const R r2a = Bx.B[N + 1] * By.B[N] / (hN * dxy);
    const R r2b = Bx.B[N] * By.B[N + 1] / (hN * dxy);
    rep.cd2 = abs(s2 - (r2a - r2b));
    rep.scale_cd2 = std::max({sc2, R(abs(r2a)), R(abs(r2b))});

    const R r1a = Bx.B[N + 1] / dxy, r1b = By.B[N + 1] / dxy;
    rep.cd1 = abs(s1 - (r1a - r1b));
    rep.scale_cd1 = std::max({sc1, R(abs(r1a)), R(abs(r1b))});

    const R c2a = Bx.dB[N + 1] * Bx.B[N] / hN, c2b = Bx.dB[N] * Bx.B[N + 1] / hN;
    rep.cd2_confluent = abs(s2c - (c2a - c2b));
    rep.scale_cd2_confluent = std::max({sc2c, R(abs(c2a)), R(abs(c2b))});

    rep.cd1_confluent = abs(s1c - Bx.dB[N + 1]);
    rep.scale_cd1_confluent = std::max(sc1c, R(abs(Bx.dB[N + 1])));
    return rep;
}

template <class R>
DeterminantalResidual<R> verify_determinantal(const BandedHessenberg<R>& T, const InitialConditionData<R>& ic, int n,
                                              const R& x) {
    using std::abs;
    const int p = T.p();
    need_order(T, n + p - 1, "verify_determinantal");
    const auto A = eval_type_I(T, ic, x, n + p - 1);
    const auto B = eval_type_II(T, x, n);
    Matrix<R> M(static_cast<std::size_t>(p), std::vector<R>(static_cast<std::size_t>(p)));
    for (int r = 0; r < p; ++r)
        for (int a = 0; a < p; ++a) M[r][a] = A[a][n + r];
    const R hn = signed_subdiagonal_product(T, n);
    DeterminantalResidual<R> out;
    const R rhs = hn * linalg::determinant(M);
    out.residual = abs(B.B[n] - rhs);
    out.scale = std::max({R(abs(B.B[n])), R(abs(hn) * linalg::permanent_abs(M)), R(1e-300)});
    return out;
}

template <class R>
PolynomialEvaluation<R> evaluate_all(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N,
                                     const R& x) {
    const int p = gen.p();
    const auto T = assemble_truncation<R>(gen, N + p);
    PolynomialEvaluation<R> e;
    e.x = x;
    const auto b = eval_type_II(T, x, N + 1);
    e.typeII = b.B;
    e.typeII_deriv = b.dB;
    e.typeI = eval_type_I(T, ic, x, N + p - 1);
    e.truncated = eval_truncated(T, N, x);
    e.second_kind = second_kind(T, ic, N, x);
    for (int n = 0; n <= N + 1; ++n) e.h.push_back(signed_subdiagonal_product(T, n));
    return e;
}

#define MULTIHESS_INSTANTIATE_V(R, V)                                                                             \
    template TypeIIValues<V> eval_type_II<R, V>(const BandedHessenberg<R>&, const V&, int);                       \
    template Matrix<V> eval_type_I<R, V>(const BandedHessenberg<R>&, const InitialConditionData<R>&, const V&, int); \
    template std::vector<V> eval_truncated<R, V>(const BandedHessenberg<R>&, int, const V&);                      \
    template std::vector<V> second_kind<R, V>(const BandedHessenberg<R>&, const InitialConditionData<R>&, int,      \
                                              const V&);

#define MULTIHESS_INSTANTIATE(R)                                                                                   \
    MULTIHESS_INSTANTIATE_V(R, R)                                                                                  \
    template R q_determinant<R, R>(const BandedHessenberg<R>&, const InitialConditionData<R>&, int, int, const R&,  \
                                   R*);                                                                           \
    template struct CdReport<R>;                                                                                   \
    template CdReport<R> verify_cd<R>(const BandedHessenberg<R>&, const InitialConditionData<R>&, int, const R&,    \
                                      const R&);                                                                  \
    template DeterminantalResidual<R> verify_determinantal<R>(const BandedHessenberg<R>&,                          \
                                                              const InitialConditionData<R>&, int, const R&);      \
    template PolynomialEvaluation<R> evaluate_all<R>(const GeneratorSequence&, const InitialConditionData<R>&, int, \
                                                     const R&);

MULTIHESS_INSTANTIATE(double)
MULTIHESS_INSTANTIATE(extended)
MULTIHESS_INSTANTIATE_V(double, std::complex<double>)

}  // namespace multihess
