#include "multihess/markov.hpp"

#include "multihess/errors.hpp"
#include "multihess/kernels.hpp"
#include "multihess/linalg.hpp"
#include "multihess/polynomials.hpp"
#include "multihess/real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace multihess {

std::string kind_name(ChainKind k) { return k == ChainKind::I ? "I" : "II"; }

ChainKind parse_kind(const std::string& s) {
    if (s == "I" || s == "1") return ChainKind::I;
    if (s == "II" || s == "2") return ChainKind::II;
    throw InvalidInput("kind: expected \"I\" or \"II\", got \"" + s + "\"");
}

std::string classification_name(Classification c) {
    switch (c) {
    case Classification::Recurrent: return "recurrent";
    case Classification::Transient: return "transient";
    default: return "inconclusive";
    }
}

namespace {

template <class R> Matrix<R> zeros(std::size_t rows, std::size_t cols) {
    return Matrix<R>(rows, std::vector<R>(cols, R(0)));
}

template <class R> R row_deviation(const Matrix<R>& M) {
    using std::abs;
    R worst(0);
    for (const auto& row : M) {
        R s(0);
        for (const auto& v : row) s += v;
        worst = std::max(worst, R(abs(s - R(1))));
    }
    return worst;
}

void check_state(int k, int N, const char* what) {
    if (k < 0 || k > N)
        throw InvalidInput(std::string(what) + ": state " + std::to_string(k) + " outside 0.." + std::to_string(N));
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

// ---- factors -------------------------------------------------------------------------------

template <class R> Matrix<R> StochasticFactors<R>::product() const {
    const std::size_t n = static_cast<std::size_t>(N + 1);
    Matrix<R> P = linalg::identity<R>(n);
    for (int a = 0; a < p; ++a) {
        auto F = zeros<R>(n, n);
        for (int i = 0; i <= N; ++i) {
            F[i][i] = lower_diag[a][i];
            if (i > 0) F[i][i - 1] = lower_sub[a][i];
        }
        P = linalg::multiply(P, F);
    }
    auto Y = zeros<R>(n, n);
    for (int i = 0; i <= N; ++i) {
        Y[i][i] = upper_diag[i];
        if (i < N) Y[i][i + 1] = upper_super[i];
    }
    return linalg::multiply(P, Y);
}

template <class R> R StochasticFactors<R>::max_row_deviation() const {
    using std::abs;
    R worst(0);
    for (int a = 0; a < p; ++a)
        for (int i = 0; i <= N; ++i) {
            const R s = lower_diag[a][i] + (i > 0 ? lower_sub[a][i] : R(0));
            worst = std::max(worst, R(abs(s - R(1))));
        }
    for (int i = 0; i <= N; ++i) {
        const R s = upper_diag[i] + (i < N ? upper_super[i] : R(0));
        worst = std::max(worst, R(abs(s - R(1))));
    }
    return worst;
}

template <class R> R StochasticFactors<R>::min_required_entry() const {
    R m = upper_diag[0];
    for (int a = 0; a < p; ++a)
        for (int i = 0; i <= N; ++i) {
            m = std::min(m, lower_diag[a][i]);
            if (i > 0) m = std::min(m, lower_sub[a][i]);
        }
    for (int i = 0; i <= N; ++i) {
        m = std::min(m, upper_diag[i]);
        if (i < N) m = std::min(m, upper_super[i]);
    }
    return m;
}

template <class R> R StochasticBanded<R>::max_row_deviation() const { return row_deviation(P); }

template <class R> R StochasticBanded<R>::min_entry() const {
    R m = P.at(0).at(0);
    for (const auto& row : P)
        for (const auto& v : row) m = std::min(m, v);
    return m;
}

template <class R> R StochasticBanded<R>::operator()(int i, int j) const {
    if (i < 0 || j < 0 || i >= static_cast<int>(P.size()) || j >= static_cast<int>(P[i].size())) return R(0);
    return P[i][j];
}

// ---- spectral chain data -------------------------------------------------------------------

template <class R> ChainAnalysis<R> analyze_chain(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N) {
    ChainAnalysis<R> c;
    c.p = gen.p();
    c.N = N;
    c.base = decomposition(gen, ic, N);
    c.lambda1 = c.base.lambda[0];
    // Equal to sum_a A^(a)_n(lambda_j) mu_{j,a}; the truncated polynomials avoid the
    // cancellation of the forward type I recurrence.
    c.forms = c.base.left;
    c.B_top = c.base.right[0];
    c.pi_II.resize(c.B_top.size());
    c.pi_I.resize(c.B_top.size());
    c.stationary.resize(c.B_top.size());
    for (int n = 0; n <= N; ++n) {
        c.pi_II[n] = R(1) / c.B_top[n];
        c.pi_I[n] = c.forms[0][n] / c.forms[0][0];
        c.stationary[n] = c.forms[0][n] * c.B_top[n];
    }
    return c;
}

template <class R>
StochasticBanded<R> monic_to_stochastic(const ChainAnalysis<R>& chain, const GeneratorSequence& gen, ChainKind kind) {
    const int N = chain.N;
    const auto T = assemble_truncation<R>(gen, N);
    StochasticBanded<R> s;
    s.kind = kind;
    s.p = chain.p;
    s.N = N;
    s.scale = chain.lambda1;
    s.P = zeros<R>(static_cast<std::size_t>(N + 1), static_cast<std::size_t>(N + 1));
    if (kind == ChainKind::II) {
        s.pi_diag = chain.pi_II;
        for (int i = 0; i <= N; ++i)
            for (int j = std::max(0, i - chain.p); j <= std::min(N, i + 1); ++j)
                s.P[i][j] = s.pi_diag[i] * T(i, j) / (chain.lambda1 * s.pi_diag[j]);
    } else {
        s.pi_diag = chain.pi_I;
        for (int i = 0; i <= N; ++i)
            for (int j = std::max(0, i - 1); j <= std::min(N, i + chain.p); ++j)
                s.P[i][j] = T(j, i) * s.pi_diag[j] / (s.pi_diag[i] * chain.lambda1);
    }
    return s;
}

template <class R>
StochasticBanded<R> monic_to_stochastic(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N,
                                        ChainKind kind) {
    return monic_to_stochastic(analyze_chain(gen, ic, N), gen, kind);
}

template <class R> StochasticBanded<R> semi_stochastic_II(const GeneratorSequence& gen, int rows) {
    if (rows < 0) throw InvalidInput("rows: must be >= 0");
    const int p = gen.p();
    const auto T = assemble_truncation<R>(gen, rows);
    const auto B = eval_type_II(T, R(1), rows + 1).B;
    for (int n = 0; n <= rows + 1; ++n)
        if (!(B[n] > R(0)))
            throw NumericError("normalization", "B_n(1) <= 0: the eta = 1 hypothesis fails for this generator",
                               "n = " + std::to_string(n) + ", B_n(1) = " + num(to_double(B[n])));
    StochasticBanded<R> s;
    s.kind = ChainKind::II;
    s.p = p;
    s.N = rows;
    s.semi = true;
    s.assumes_eta_one = true;
    s.P = zeros<R>(static_cast<std::size_t>(rows + 1), static_cast<std::size_t>(rows + 2));
    s.pi_diag.resize(static_cast<std::size_t>(rows + 2));
    for (int n = 0; n <= rows + 1; ++n) s.pi_diag[n] = R(1) / B[n];
    for (int i = 0; i <= rows; ++i) {
        for (int j = std::max(0, i - p); j <= i; ++j) s.P[i][j] = T(i, j) * B[j] / B[i];
        s.P[i][i + 1] = B[i + 1] / B[i];
    }
    return s;
}

template <class R>
StochasticBanded<R> semi_stochastic_I(const GeneratorSequence& gen, const InitialConditionData<R>& ic,
                                      const std::vector<R>& F, int rows) {
    if (rows < 0) throw InvalidInput("rows: must be >= 0");
    const int p = gen.p();
    if (static_cast<int>(F.size()) != p - 1)
        throw InvalidInput("F: expected " + std::to_string(p - 1) + " ratio estimates");
    const int cols = rows + p;
    const int top = std::max(cols, p - 1);
    const auto T = assemble_truncation<R>(gen, top);
    const auto A = eval_type_I(T, ic, R(1), top);
    std::vector<R> omega(static_cast<std::size_t>(cols + 1));
    for (int n = 0; n <= cols; ++n) {
        omega[n] = A[0][n];
        for (int a = 2; a <= p; ++a) omega[n] += F[a - 2] * A[a - 1][n];
        if (!(omega[n] > R(0)))
            throw NumericError("normalization", "Omega entry not positive; the type I chain is undefined",
                               "n = " + std::to_string(n) + ", Omega_n = " + num(to_double(omega[n])));
    }
    StochasticBanded<R> s;
    s.kind = ChainKind::I;
    s.p = p;
    s.N = rows;
    s.semi = true;
    s.assumes_eta_one = true;
    s.pi_diag = omega;
    s.P = zeros<R>(static_cast<std::size_t>(rows + 1), static_cast<std::size_t>(cols + 1));
    for (int i = 0; i <= rows; ++i)
        for (int j = std::max(0, i - 1); j <= i + p; ++j) s.P[i][j] = T(j, i) * omega[j] / omega[i];
    return s;
}

// ---- bridge --------------------------------------------------------------------------------

template <class R> StochasticFactors<R> stochastic_factors(int p, const std::vector<R>& alpha, int N) {
    const auto T = assemble<R>(p, alpha, N);
    const auto v = eval_type_II(T, R(1), N).B;
    StochasticFactors<R> f;
    f.p = p;
    f.N = N;
    f.pi.resize(static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n) {
        if (!(v[n] > R(0)))
            throw NumericError("normalization", "B_n(1) <= 0 for the rescaled matrix", "n = " + std::to_string(n));
        f.pi[n] = R(1) / v[n];
    }
    const auto bf = bidiagonal_factors(p, alpha, N);
    // D_1 = diag(U pi^{-1} 1)^{-1}, D_{j+1} = diag(L_{p-j+1} D_j^{-1} 1)^{-1}
    f.D.assign(static_cast<std::size_t>(p), std::vector<R>(static_cast<std::size_t>(N + 1)));
    for (int i = 0; i <= N; ++i) {
        R s = bf.upper[i] / f.pi[i];
        if (i < N) s += R(1) / f.pi[i + 1];
        f.D[0][i] = R(1) / s;
    }
    for (int j = 1; j < p; ++j) {
        const auto& L = bf.lower[p - j];  // L_{p-j+1}
        for (int i = 0; i <= N; ++i) {
            R s = R(1) / f.D[j - 1][i];
            if (i > 0) s += L[i] / f.D[j - 1][i - 1];
            f.D[j][i] = R(1) / s;
        }
    }
    // Pi_a = D_{p-a+2} L_a D_{p-a+1}^{-1} with D_{p+1} = pi
    auto Dj = [&](int j) -> const std::vector<R>& { return j == p + 1 ? f.pi : f.D[j - 1]; };
    f.lower_sub.assign(static_cast<std::size_t>(p), std::vector<R>(static_cast<std::size_t>(N + 1), R(0)));
    f.lower_diag.assign(static_cast<std::size_t>(p), std::vector<R>(static_cast<std::size_t>(N + 1), R(0)));
    for (int a = 1; a <= p; ++a) {
        const auto& left = Dj(p - a + 2);
        const auto& right = Dj(p - a + 1);
        for (int i = 0; i <= N; ++i) {
            f.lower_diag[a - 1][i] = left[i] / right[i];
            if (i > 0) f.lower_sub[a - 1][i] = left[i] * bf.lower[a - 1][i] / right[i - 1];
        }
    }
    // Upsilon = D_1 U pi^{-1}
    f.upper_diag.resize(static_cast<std::size_t>(N + 1));
    f.upper_super.assign(static_cast<std::size_t>(N), R(0));
    for (int i = 0; i <= N; ++i) {
        f.upper_diag[i] = f.D[0][i] * bf.upper[i] / f.pi[i];
        if (i < N) f.upper_super[i] = f.D[0][i] / f.pi[i + 1];
    }
    return f;
}

namespace {

// Largest root of B_{N+1} by Newton from above; monotone since all roots are real.
extended top_root(const BandedHessenberg<extended>& T, double seed) {
    using std::abs;
    const int N = T.order();
    extended x = extended(seed) * extended(1 + 1e-9);
    for (int it = 0; it < 200; ++it) {
        const auto v = eval_type_II(T, x, N + 1);
        const extended step = v.B[N + 1] / v.dB[N + 1];
        x -= step;
        if (abs(step) <= real_traits<extended>::root_tol() * abs(x)) break;
    }
    return x;
}

template <class R> std::vector<R> convert(const std::vector<extended>& v) {
    std::vector<R> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<R>(v[i]);
    return out;
}

template <class R> std::vector<std::vector<R>> convert(const std::vector<std::vector<extended>>& v) {
    std::vector<std::vector<R>> out;
    for (const auto& row : v) out.push_back(convert<R>(row));
    return out;
}

}  // namespace

// The normalization vector B_n(lambda_1) comes from a forward recurrence at the top
// eigenvalue, which loses most digits in double; the factors are built in extended.
template <class R> StochasticBanded<R> to_stochastic(const GeneratorSequence& gen, int N) {
    if (N < 0) throw InvalidInput("N: must be >= 0");
    const int p = gen.p();
    const auto alpha_d = alpha_vector<double>(gen, gen.required_for(N));
    const double seed = eigen_levels(assemble<double>(p, alpha_d, N)).top()[0];
    std::vector<extended> alpha(alpha_d.begin(), alpha_d.end());
    const extended lambda1 = top_root(assemble<extended>(p, alpha, N), seed);
    for (auto& a : alpha) a /= lambda1;
    const auto fx = stochastic_factors(p, alpha, N);
    StochasticFactors<R> f;
    f.p = p;
    f.N = N;
    f.lower_sub = convert<R>(fx.lower_sub);
    f.lower_diag = convert<R>(fx.lower_diag);
    f.upper_diag = convert<R>(fx.upper_diag);
    f.upper_super = convert<R>(fx.upper_super);
    f.pi = convert<R>(fx.pi);
    f.D = convert<R>(fx.D);
    StochasticBanded<R> s;
    s.kind = ChainKind::II;
    s.p = p;
    s.N = N;
    s.scale = static_cast<R>(lambda1);
    s.factors = f;
    s.P = f.product();
    s.pi_diag = f.pi;
    return s;
}

template <class R> std::vector<R> monic_alphas(const StochasticFactors<R>& f) {
    const int p = f.p, N = f.N;
    auto fail = [](const std::string& where) {
        throw InvalidInput("factorization invalid: non-positive entry at " + where);
    };
    for (int a = 0; a < p; ++a)
        for (int i = 0; i <= N; ++i) {
            if (!(f.lower_diag[a][i] > R(0))) fail("Pi_" + std::to_string(a + 1) + "(" + std::to_string(i) + "," + std::to_string(i) + ")");
            if (i > 0 && !(f.lower_sub[a][i] > R(0)))
                fail("Pi_" + std::to_string(a + 1) + "(" + std::to_string(i) + "," + std::to_string(i - 1) + ")");
        }
    for (int i = 0; i <= N; ++i) {
        if (!(f.upper_diag[i] > R(0))) fail("Upsilon(" + std::to_string(i) + "," + std::to_string(i) + ")");
        if (i < N && !(f.upper_super[i] > R(0))) fail("Upsilon(" + std::to_string(i) + "," + std::to_string(i + 1) + ")");
    }
    using std::abs;
    if (f.max_row_deviation() > R(1e-10)) throw InvalidInput("factorization invalid: factor rows do not sum to 1");

    // pi_{k+1} = pi_k / P_{k,k+1}, P_{k,k+1} = prod_b (Pi_b)_{kk} Upsilon_{k,k+1}
    std::vector<R> pi(static_cast<std::size_t>(N + 1));
    pi[0] = R(1);
    for (int k = 0; k < N; ++k) {
        R step = f.upper_super[k];
        for (int b = 0; b < p; ++b) step *= f.lower_diag[b][k];
        pi[k + 1] = pi[k] / step;
    }
    std::vector<R> alpha(static_cast<std::size_t>(1 + (p + 1) * N), R(0));
    for (int i = 1; i <= N; ++i) {
        R before_i(1), upto_prev(1);  // prod_{b<a} (Pi_b)_{ii}, prod_{b<=a} (Pi_b)_{i-1,i-1}
        for (int a = 1; a <= p; ++a) {
            upto_prev *= f.lower_diag[a - 1][i - 1];
            alpha[static_cast<std::size_t>(a + (i - 1) * (p + 1))] =
                f.lower_sub[a - 1][i] * (pi[i - 1] / pi[i]) * before_i / upto_prev;
            before_i *= f.lower_diag[a - 1][i];
        }
    }
    for (int i = 0; i < N; ++i)
        alpha[static_cast<std::size_t>(i * (p + 1))] = f.upper_diag[i] * pi[i] / (f.upper_super[i] * pi[i + 1]);
    R last = f.upper_diag[N];
    for (int b = 0; b < p; ++b) last *= f.lower_diag[b][N];
    alpha[static_cast<std::size_t>(N * (p + 1))] = last;
    return alpha;
}

template <class R> MonicResult to_monic(const StochasticFactors<R>& f, R scale) {
    const auto a = monic_alphas(f);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = to_double(R(a[i] * scale));
    return MonicResult{GeneratorSequence::list(f.p, out), to_double(scale)};
}

// ---- Karlin-McGregor -----------------------------------------------------------------------

template <class R> R km_probability(const ChainAnalysis<R>& c, int n, int k, int l, ChainKind kind) {
    if (n < 0) throw InvalidInput("steps: must be >= 0");
    check_state(k, c.N, "from");
    check_state(l, c.N, "to");
    const auto& lam = c.base.lambda;
    const auto& U = c.base.right;
    R s(0);
    for (std::size_t j = 0; j < lam.size(); ++j) {
        const R ratio = lam[j] / c.lambda1;
        R pw(1);
        for (int i = 0; i < n; ++i) pw *= ratio;
        s += (kind == ChainKind::II ? U[j][k] * c.forms[j][l] : U[j][l] * c.forms[j][k]) * pw;
    }
    return kind == ChainKind::II ? c.theta(k, l) * s : (c.pi_I[l] / c.pi_I[k]) * s;
}

template <class R> std::vector<R> km_row(const ChainAnalysis<R>& c, int n, int k, ChainKind kind) {
    std::vector<R> row(static_cast<std::size_t>(c.N + 1));
    for (int l = 0; l <= c.N; ++l) row[l] = km_probability(c, n, k, l, kind);
    return row;
}

template <class R> std::vector<R> power_row(const StochasticBanded<R>& P, int n, int k) {
    if (P.semi) throw InvalidInput("power_row: finite chains only");
    check_state(k, P.N, "from");
    const std::size_t m = P.P.size();
    std::vector<R> x(m, R(0)), y(m);
    x[k] = R(1);
    for (int step = 0; step < n; ++step) {
        std::fill(y.begin(), y.end(), R(0));
        for (std::size_t i = 0; i < m; ++i) {
            if (x[i] == R(0)) continue;
            for (std::size_t j = 0; j < m; ++j) y[j] += x[i] * P.P[i][j];
        }
        std::swap(x, y);
    }
    return x;
}

template <class R>
GeneratingValues<R> generating_functions(const ChainAnalysis<R>& c, const R& s, int k, int l, ChainKind kind) {
    using std::abs;
    if (!(abs(s) < R(1))) throw InvalidInput("s: |s| must be < 1");
    check_state(k, c.N, "from");
    check_state(l, c.N, "to");
    const auto& lam = c.base.lambda;
    const auto& U = c.base.right;
    auto P_of = [&](int from, int to) {
        R sum(0);
        for (std::size_t j = 0; j < lam.size(); ++j) {
            const R den = R(1) - s * lam[j] / c.lambda1;
            sum += (kind == ChainKind::II ? U[j][from] * c.forms[j][to] : U[j][to] * c.forms[j][from]) / den;
        }
        return kind == ChainKind::II ? c.theta(from, to) * sum : (c.pi_I[to] / c.pi_I[from]) * sum;
    };
    GeneratingValues<R> g;
    g.P = P_of(k, l);
    const R Pll = k == l ? g.P : P_of(l, l);
    g.F = k == l ? R(1) - R(1) / Pll : g.P / Pll;
    return g;
}

template <class R>
SeriesCheck<R> generating_series(const StochasticBanded<R>& P, const R& s, int k, int l, double target) {
    using std::abs;
    if (!(abs(s) < R(1))) throw InvalidInput("s: |s| must be < 1");
    check_state(k, P.N, "from");
    check_state(l, P.N, "to");
    SeriesCheck<R> out;
    const R as = abs(s);
    R spow(1);  // s^n
    R apow = as;  // |s|^{n+1}
    const std::size_t m = P.P.size();
    std::vector<R> x(m, R(0)), y(m);
    x[k] = R(1);
    for (int n = 0;; ++n) {
        out.series += x[l] * spow;
        out.n_max = n;
        out.tail_bound = apow / (R(1) - as);
        if (out.tail_bound < R(target) || n > 100000) break;
        std::fill(y.begin(), y.end(), R(0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) y[j] += x[i] * P.P[i][j];
        std::swap(x, y);
        spow *= s;
        apow *= as;
    }
    return out;
}

template <class R> std::vector<R> stationary(const ChainAnalysis<R>& c) { return c.stationary; }

template <class R> std::vector<R> stationary_from_tables(const ChainAnalysis<R>& c) {
    std::vector<R> v(static_cast<std::size_t>(c.N + 1));
    for (int n = 0; n <= c.N; ++n) v[n] = c.base.left[0][n] * c.base.right[0][n];
    return v;
}

// ---- recurrence ----------------------------------------------------------------------------

template <class R> RecurrenceReport recurrence_finite(const ChainAnalysis<R>& c, int m_max) {
    using std::pow;
    RecurrenceReport rep;
    rep.mode = "finite";
    rep.classification = Classification::Recurrent;
    for (int l = 0; l <= c.N; ++l) {
        FiniteRecurrence fr;
        fr.state = l;
        fr.monotone = true;
        for (int m = 2; m <= m_max; ++m) {
            const R s = R(1) - pow(R(10), R(-m));
            const auto g = generating_functions(c, s, l, l, ChainKind::II);
            const double F = to_double(g.F);
            if (!fr.F.empty() && !(F > fr.F.back())) fr.monotone = false;
            if (!(F <= 1.0)) fr.monotone = false;
            fr.s.push_back(to_double(s));
            fr.F.push_back(F);
            fr.gap_at_last = to_double(R(R(1) - g.F));
        }
        rep.finite.push_back(std::move(fr));
    }
    rep.note = "finite chains are recurrent; F_ll(s) evaluated at s = 1 - 10^-m";
    return rep;
}

namespace {

struct SemiTrend {
    Classification cls = Classification::Inconclusive;
    std::vector<int> orders;
    std::vector<double> integral, top, m1;
    std::vector<std::vector<double>> masses, F;
    std::string note;
};

template <class R>
SemiTrend semi_trend(const GeneratorSequence& gen, const InitialConditionData<R>& ic, std::vector<int> orders) {
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    SemiTrend t;
    t.orders = orders;
    const int p = gen.p();
    bool top_ok = true;
    for (int N : orders) {
        const auto sd = decomposition(gen, ic, N);
        t.top.push_back(to_double(sd.lambda[0]));
        if (!(sd.lambda[0] < R(1))) top_ok = false;
        R I(0);
        for (std::size_t k = 0; k < sd.lambda.size(); ++k) I += sd.mu[k][0] / (R(1) - sd.lambda[k]);
        t.integral.push_back(to_double(I));
        const auto T = assemble_truncation<R>(gen, N);
        const auto bk = second_kind(T, ic, N, R(1));
        const R dB = eval_type_II(T, R(1), N + 1).dB[N + 1];
        std::vector<double> m(static_cast<std::size_t>(p));
        for (int a = 0; a < p; ++a) m[a] = to_double(R(bk[a] / dB));
        t.masses.push_back(m);
        std::vector<double> F;
        for (int a = 1; a < p; ++a) F.push_back(to_double(R(sd.mu[0][a] / sd.mu[0][0])));
        t.F.push_back(F);
    }
    if (!top_ok) {
        t.note = "top eigenvalue >= 1 at some order: the eta = 1 normalization does not hold";
        return t;
    }
    const std::size_t n = t.integral.size();
    if (n < 3) {
        t.note = "need at least three orders for a trend";
        return t;
    }
    // Growth per unit log N over the last two intervals: a divergent integral keeps at least
    // its log-rate, a convergent one with error ~ N^-b decays by the order ratio to the power b.
    const double I1 = t.integral[n - 3], I2 = t.integral[n - 2], I3 = t.integral[n - 1];
    const double N1 = orders[n - 3] + 1.0, N2 = orders[n - 2] + 1.0, N3 = orders[n - 1] + 1.0;
    if (!std::isfinite(I1) || !std::isfinite(I2) || !std::isfinite(I3)) {
        t.note = "integral estimate not finite";
    } else if (std::abs(I3 - I2) <= 1e-9 * std::abs(I3)) {
        t.cls = Classification::Transient;
        t.note = "integral estimate settled: convergent";
    } else {
        const double r1 = (I2 - I1) / std::log(N2 / N1), r2 = (I3 - I2) / std::log(N3 / N2);
        const double rate = r2 / r1;
        if (r1 <= 0 || r2 <= 0) {
            t.note = "integral estimate not increasing in N";
        } else if (rate >= 0.9) {
            t.cls = Classification::Recurrent;
            t.note = "integral estimate grows at least like log N: divergent";
        } else if (rate <= 0.8) {
            t.cls = Classification::Transient;
            t.note = "integral increments shrink in log N: convergent";
        } else {
            t.note = "integral growth rate between the convergent and divergent bands";
        }
    }
    return t;
}

}  // namespace

template <class R>
RecurrenceReport recurrence_semi(const GeneratorSequence& gen, const InitialConditionData<R>& ic,
                                 const std::vector<int>& orders, int stationary_terms) {
    if (orders.empty()) throw InvalidInput("orders: need at least one truncation order");
    for (int N : orders)
        if (N < 0) throw InvalidInput("orders: entries must be >= 0");
    RecurrenceReport rep;
    rep.mode = "semi";
    rep.heuristic = true;
    rep.assumes_eta_one = true;
    const auto t = semi_trend(gen, ic, orders);
    rep.classification = t.cls;
    rep.orders = t.orders;
    rep.integral = t.integral;
    rep.top_eigenvalue = t.top;
    rep.masses = t.masses;
    rep.F_ratios = t.F;
    rep.note = t.note;

    auto doubled = t.orders;
    doubled.push_back(2 * t.orders.back());
    rep.stable_under_doubling = semi_trend(gen, ic, doubled).cls == t.cls;

    const std::size_t n = t.masses.size();
    if (n >= 2) {
        const double m1 = t.masses[n - 1][0], m1p = t.masses[n - 2][0];
        if (m1 > 1e-6 && std::abs(m1 - m1p) <= 1e-3 * m1) rep.ergodic = true;
    }
    if (rep.ergodic) {
        rep.classification = Classification::Recurrent;
        const int p = gen.p();
        const int top = std::max(stationary_terms, p - 1);
        const auto T = assemble_truncation<R>(gen, top);
        const auto A = eval_type_I(T, ic, R(1), top);
        const auto B = eval_type_II(T, R(1), stationary_terms).B;
        const auto& m = t.masses.back();
        for (int k = 0; k < stationary_terms; ++k) {
            R s(0);
            for (int a = 0; a < p; ++a) s += A[a][k] * R(m[a]);
            rep.stationary.push_back(to_double(R(s * B[k])));
            rep.stationary_partial_sum += rep.stationary.back();
        }
    }
    return rep;
}

// ---- CSV -----------------------------------------------------------------------------------

template <class R> void write_stochastic_csv(std::ostream& os, const StochasticBanded<R>& P) {
    os << "# kind=" << kind_name(P.kind) << " p=" << P.p << " N=" << P.N << " semi=" << (P.semi ? 1 : 0) << "\n";
    os << "i,j,value\n";
    for (std::size_t i = 0; i < P.P.size(); ++i)
        for (std::size_t j = 0; j < P.P[i].size(); ++j)
            if (P.P[i][j] != R(0)) os << i << "," << j << "," << num(to_double(P.P[i][j])) << "\n";
}

StochasticBanded<double> read_stochastic_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("#", 0) != 0) throw InvalidInput("stochastic CSV: missing header line");
    StochasticBanded<double> s;
    bool have_kind = false, have_p = false, have_N = false;
    std::istringstream hs(line.substr(1));
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "kind") { s.kind = parse_kind(val); have_kind = true; }
            else if (key == "p") { s.p = std::stoi(val); have_p = true; }
            else if (key == "N") { s.N = std::stoi(val); have_N = true; }
            else if (key == "semi") s.semi = val == "1";
        } catch (const std::logic_error&) {
            throw InvalidInput("stochastic CSV: bad header value for " + key);
        }
    }
    if (!have_kind || !have_p || !have_N) throw InvalidInput("stochastic CSV: header must declare kind, p and N");
    if (s.semi) throw InvalidInput("stochastic CSV: semi-infinite views cannot be imported");
    if (s.p < 1 || s.N < 0) throw InvalidInput("stochastic CSV: header p or N out of range");
    if (!std::getline(is, line) || line.rfind("i,j,value", 0) != 0) throw InvalidInput("stochastic CSV: missing column header");
    s.P = zeros<double>(static_cast<std::size_t>(s.N + 1), static_cast<std::size_t>(s.N + 1));
    int row = 2;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        int i = 0, j = 0;
        double v = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &i, &j, &v) != 3)
            throw InvalidInput("stochastic CSV: cannot parse line " + std::to_string(row));
        if (i < 0 || j < 0 || i > s.N || j > s.N)
            throw InvalidInput("stochastic CSV: index out of range on line " + std::to_string(row));
        const int lo = s.kind == ChainKind::II ? i - s.p : i - 1;
        const int hi = s.kind == ChainKind::II ? i + 1 : i + s.p;
        if (j < lo || j > hi) throw InvalidInput("stochastic CSV: entry outside the band on line " + std::to_string(row));
        s.P[i][j] = v;
    }
    if (s.min_entry() < 0) throw InvalidInput("stochastic CSV: negative entry");
    if (s.max_row_deviation() > 1e-12) throw InvalidInput("stochastic CSV: rows do not sum to 1");
    return s;
}

#define MULTIHESS_INSTANTIATE(R)                                                                                   \
    template struct StochasticFactors<R>;                                                                          \
    template struct StochasticBanded<R>;                                                                           \
    template ChainAnalysis<R> analyze_chain<R>(const GeneratorSequence&, const InitialConditionData<R>&, int);     \
    template StochasticBanded<R> monic_to_stochastic<R>(const ChainAnalysis<R>&, const GeneratorSequence&, ChainKind); \
    template StochasticBanded<R> monic_to_stochastic<R>(const GeneratorSequence&, const InitialConditionData<R>&, int, \
                                                        ChainKind);                                               \
    template StochasticBanded<R> semi_stochastic_II<R>(const GeneratorSequence&, int);                             \
    template StochasticBanded<R> semi_stochastic_I<R>(const GeneratorSequence&, const InitialConditionData<R>&,    \
                                                      const std::vector<R>&, int);                                 \
    template StochasticBanded<R> to_stochastic<R>(const GeneratorSequence&, int);                                  \
    template StochasticFactors<R> stochastic_factors<R>(int, const std::vector<R>&, int);                          \
    template MonicResult to_monic<R>(const StochasticFactors<R>&, R);                                              \
    template std::vector<R> monic_alphas<R>(const StochasticFactors<R>&);                                          \
    template R km_probability<R>(const ChainAnalysis<R>&, int, int, int, ChainKind);                               \
    template std::vector<R> km_row<R>(const ChainAnalysis<R>&, int, int, ChainKind);                               \
    template std::vector<R> power_row<R>(const StochasticBanded<R>&, int, int);                                    \
    template GeneratingValues<R> generating_functions<R>(const ChainAnalysis<R>&, const R&, int, int, ChainKind);  \
    template SeriesCheck<R> generating_series<R>(const StochasticBanded<R>&, const R&, int, int, double);          \
    template std::vector<R> stationary<R>(const ChainAnalysis<R>&);                                                \
    template std::vector<R> stationary_from_tables<R>(const ChainAnalysis<R>&);                                    \
    template RecurrenceReport recurrence_finite<R>(const ChainAnalysis<R>&, int);                                  \
    template RecurrenceReport recurrence_semi<R>(const GeneratorSequence&, const InitialConditionData<R>&,         \
                                                 const std::vector<int>&, int);                                    \
    template void write_stochastic_csv<R>(std::ostream&, const StochasticBanded<R>&);

MULTIHESS_INSTANTIATE(double)
MULTIHESS_INSTANTIATE(extended)

}  // namespace multihess
