#include "multihess/spectral.hpp"

#include "multihess/errors.hpp"
#include "multihess/kernels.hpp"
#include "multihess/linalg.hpp"
#include "multihess/polynomials.hpp"
#include "multihess/real.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

namespace multihess {

namespace {

template <class R> int sgn(const R& v) { return (v > R(0)) - (v < R(0)); }

template <class R> std::string show(const R& v) {
    std::ostringstream os;
    os.precision(17);
    os << to_double(v);
    return os.str();
}

template <class R> R leading_row_sum_bound(const BandedHessenberg<R>& T, int n) {
    using std::abs;
    R best(0);
    for (int i = 0; i <= n; ++i) {
        R s = (i < n) ? R(1) : R(0);
        for (int d = 0; d <= std::min(T.p(), i); ++d) s += abs(T.sub(i, d));
        if (s > best) best = s;
    }
    return best;
}

template <class R> class LevelSolver {
public:
    explicit LevelSolver(const BandedHessenberg<R>& T) : T_(T) {}

    void eval(int n, const R& x, R& v, R& d, int& c) const { kernels::last_batch(T_, n, &x, 1, &v, &d, &c); }

    void eval_batch(int n, const std::vector<R>& xs, std::vector<R>& v, std::vector<R>& d, std::vector<int>& c) const {
        v.resize(xs.size());
        d.resize(xs.size());
        c.resize(xs.size());
        kernels::last_batch(T_, n, xs.data(), xs.size(), v.data(), d.data(), c.data());
    }

    int count_above(int n, const R& x) const {
        R v, d;
        int c;
        eval(n, x, v, d, c);
        return c;
    }

    // Safeguarded Newton inside [a, b]; sa = sign of B_{n+1}(a).
    R refine(int n, R a, R b, int sa, R x, int newton_budget) const {
        using std::abs;
        using std::sqrt;
        const R tol = real_traits<R>::root_tol();
        const R floor_tol = sqrt(tol);
        int newton_used = 0;
        int polish = -1;  // iterations left once Newton is in its quadratic regime
        R prev_step(0);
        for (int it = 0; it < 600; ++it) {
            R f, df;
            int c;
            eval(n, x, f, df, c);
            if (f == R(0)) return x;
            if (sgn(f) == sa) a = x;
            else b = x;
            R xn;
            bool accepted = false;
            if (newton_used < newton_budget && df != R(0)) {
                ++newton_used;
                xn = x - f / df;
                accepted = xn >= a && xn <= b;
                if (!accepted && polish >= 0) return x;
                if (!accepted) xn = (a + b) / 2;
            } else {
                xn = (a + b) / 2;
            }
            const R step = abs(xn - x);
            if (step <= tol * abs(xn)) return xn;
            // next error ~ (step / prev_step^2) step^2 once the steps shrink quadratically
            if (accepted && prev_step > R(0) && step <= floor_tol * abs(xn)) {
                const R predicted = step / prev_step * (step / prev_step) * step;
                if (R(16) * predicted <= tol * abs(xn)) return xn;
            }
            prev_step = accepted ? step : R(0);
            if (polish < 0 && accepted && step <= floor_tol * abs(xn)) polish = 2;
            if (polish >= 0 && polish-- == 0) return xn;
            if (b - a <= tol * std::max(abs(a), abs(b))) return (a + b) / 2;
            x = xn;
        }
        return x;
    }

    // Root k of B_{n+1} by bisection on the sign-change count (roots above x).
    R count_root(int n, int k, const R& lo, const R& hi, const R& global_hi) const {
        using std::abs;
        const R eps = real_traits<R>::eps();
        const R slack = R(64) * eps * std::max({abs(lo), abs(hi), R(1)});
        R a = lo - slack, b = hi + slack;
        if (!(count_above(n, a) >= k + 1 && count_above(n, b) <= k)) {
            a = R(-1);
            b = global_hi * R(1.01) + R(1);
            if (!(count_above(n, a) >= k + 1 && count_above(n, b) <= k))
                throw NumericError("bracket", "sign-count bracket inconsistent",
                                   "level " + std::to_string(n) + ", root " + std::to_string(k) + ", interval [" +
                                       show(lo) + ", " + show(hi) + "]");
        }
        for (int it = 0; it < 2000; ++it) {
            const R m = (a + b) / 2;
            if (!(m > a && m < b)) break;
            if (count_above(n, m) >= k + 1) a = m;
            else b = m;
        }
        return (a + b) / 2;
    }

private:
    const BandedHessenberg<R>& T_;
};

template <class R> int expected_sign(int roots_above) { return (roots_above % 2 == 0) ? 1 : -1; }

// One level: roots of B_{n+1} given the roots of B_n (prev, descending).
template <class R>
std::vector<R> solve_level(const LevelSolver<R>& S, const BandedHessenberg<R>& T, int n, const std::vector<R>& prev,
                           const std::vector<double>* seed, int& fallbacks) {
    using std::abs;
    const R hi = leading_row_sum_bound(T, n);
    std::vector<R> lo_k(n + 1), hi_k(n + 1);
    for (int k = 0; k <= n; ++k) {
        lo_k[k] = (k < n) ? prev[k] : R(0);
        hi_k[k] = (k == 0) ? hi : prev[k - 1];
    }
    // endpoint values: prev roots, 0, hi
    std::vector<R> pts(prev.begin(), prev.end());
    pts.push_back(R(0));
    pts.push_back(hi);
    // With a seed, only brackets the double level could not separate clearly are sign-checked.
    std::vector<bool> checked(n + 1, true);
    if (seed) {
        const auto& cur = *seed;
        auto clear = [&](double inner, double outer) { return outer - inner > 1e-9 * std::max(1.0, std::abs(outer)); };
        for (int k = 0; k <= n; ++k) {
            const double lo = k < n ? to_double(prev[k]) : 0.0;
            const double up = k == 0 ? to_double(hi) : to_double(prev[k - 1]);
            checked[k] = !(clear(lo, cur[k]) && clear(cur[k], up));
        }
    }
    std::vector<std::size_t> need;
    for (int k = 0; k <= n; ++k)
        if (checked[k]) {
            need.push_back(k < n ? static_cast<std::size_t>(k) : static_cast<std::size_t>(n));
            need.push_back(k == 0 ? static_cast<std::size_t>(n + 1) : static_cast<std::size_t>(k - 1));
        }
    std::sort(need.begin(), need.end());
    need.erase(std::unique(need.begin(), need.end()), need.end());
    std::vector<R> sub_pts, sv, fd;
    std::vector<int> fc;
    for (auto i : need) sub_pts.push_back(pts[i]);
    S.eval_batch(n, sub_pts, sv, fd, fc);
    std::vector<R> fv(pts.size(), R(0));
    for (std::size_t i = 0; i < need.size(); ++i) fv[need[i]] = sv[i];
    auto f_lo = [&](int k) { return k < n ? fv[k] : fv[n]; };
    auto f_hi = [&](int k) { return k == 0 ? fv[n + 1] : fv[k - 1]; };

    std::vector<R> roots(n + 1);
    std::vector<int> lanes;
    for (int k = 0; k <= n; ++k) {
        const int s_lo = expected_sign<R>(k + 1), s_hi = expected_sign<R>(k);
        const bool ok = lo_k[k] < hi_k[k] && (!checked[k] || (sgn(f_lo(k)) == s_lo && sgn(f_hi(k)) == s_hi));
        if (seed) {
            if (ok) {
                R g = R((*seed)[k]);
                if (!(g > lo_k[k] && g < hi_k[k])) g = (lo_k[k] + hi_k[k]) / 2;
                roots[k] = S.refine(n, lo_k[k], hi_k[k], s_lo, g, 100);
            } else {
                ++fallbacks;
                roots[k] = S.count_root(n, k, lo_k[k], hi_k[k], hi);
            }
            continue;
        }
        if (ok) lanes.push_back(k);
        else {
            ++fallbacks;
            roots[k] = S.count_root(n, k, lo_k[k], hi_k[k], hi);
        }
    }
    if (!seed && !lanes.empty()) {
        // lockstep bisection: one lane per root, down to 1e-10 of the bracket width
        std::vector<R> a(lanes.size()), b(lanes.size()), target(lanes.size());
        for (std::size_t i = 0; i < lanes.size(); ++i) {
            a[i] = lo_k[lanes[i]];
            b[i] = hi_k[lanes[i]];
            target[i] = (b[i] - a[i]) * R(1e-10);
        }
        std::vector<R> mids, mv, md;
        std::vector<int> mc;
        std::vector<std::size_t> active;
        for (int it = 0; it < 64; ++it) {
            active.clear();
            mids.clear();
            for (std::size_t i = 0; i < lanes.size(); ++i)
                if (b[i] - a[i] > target[i]) {
                    active.push_back(i);
                    mids.push_back((a[i] + b[i]) / 2);
                }
            if (active.empty()) break;
            S.eval_batch(n, mids, mv, md, mc);
            for (std::size_t j = 0; j < active.size(); ++j) {
                const std::size_t i = active[j];
                const int s_lo = expected_sign<R>(lanes[i] + 1);
                if (mv[j] == R(0)) { a[i] = b[i] = mids[j]; continue; }
                if (sgn(mv[j]) == s_lo) a[i] = mids[j];
                else b[i] = mids[j];
            }
        }
        for (std::size_t i = 0; i < lanes.size(); ++i) {
            const int k = lanes[i];
            if (a[i] == b[i]) { roots[k] = a[i]; continue; }
            roots[k] = S.refine(n, a[i], b[i], expected_sign<R>(k + 1), (a[i] + b[i]) / 2, 5);
        }
    }
    return roots;
}

template <class R> EigenLevels<R> run_levels(const BandedHessenberg<R>& T, const EigenLevels<double>* seed) {
    using std::abs;
    EigenLevels<R> out;
    const int N = T.order();
    if (N < 0) return out;
    LevelSolver<R> S(T);
    out.roots.push_back({T.sub(0, 0)});
    bool first_gap = true, first_level_gap = true;
    for (int n = 1; n <= N; ++n) {
        const auto& prev = out.roots.back();
        const std::vector<double>* sd = seed ? &seed->roots[n] : nullptr;
        auto r = solve_level(S, T, n, prev, sd, out.count_fallbacks);
        bool tie = false;
        for (int k = 0; k <= n; ++k) {
            if (k < n) {
                const R g = r[k] - prev[k];
                if (!(g > R(0))) tie = true;
                if (first_gap || g < out.min_interlace_gap) { out.min_interlace_gap = g; first_gap = false; }
            }
            if (k > 0) {
                const R g = prev[k - 1] - r[k];
                if (!(g > R(0))) tie = true;
                if (first_gap || g < out.min_interlace_gap) { out.min_interlace_gap = g; first_gap = false; }
                const R lg = r[k - 1] - r[k];
                if (first_level_gap || lg < out.min_level_gap) { out.min_level_gap = lg; first_level_gap = false; }
            }
        }
        if (tie) ++out.interlace_ties;
        out.roots.push_back(std::move(r));
    }
    return out;
}

}  // namespace

template <class R> EigenLevels<R> eigen_levels(const BandedHessenberg<R>& T) {
    if constexpr (std::is_same_v<R, double>) {
        return run_levels<double>(T, nullptr);
    } else {
        const auto seed = run_levels<double>(T.template convert<double>(), nullptr);
        return run_levels<R>(T, &seed);
    }
}

template <class R> std::vector<R> eigenvalues(const GeneratorSequence& gen, int N) {
    return eigen_levels(assemble_truncation<R>(gen, N)).top();
}

template <class R> Matrix<R> christoffel_unscaled(int p, const std::vector<R>& alpha, int N, const std::vector<R>& lambda) {
    Matrix<R> mt(lambda.size(), std::vector<R>(static_cast<std::size_t>(p), R(0)));
    // B'_{N+1}(lambda_k) as a product of root differences
    std::vector<R> dprod(lambda.size(), R(1));
    for (std::size_t k = 0; k < lambda.size(); ++k)
        for (std::size_t i = 0; i < lambda.size(); ++i)
            if (i != k) dprod[k] *= lambda[k] - lambda[i];
    for (int j = 1; j <= p; ++j) {
        std::vector<R> theta;
        if (N >= 1) theta = eigen_levels(cyclic_product(p, alpha, N, j - 1).trailing(1)).top();
        const R d = script_L_scale(p, alpha, j);
        for (std::size_t k = 0; k < lambda.size(); ++k) {
            R num(1);
            for (const auto& t : theta) num *= lambda[k] - t;
            mt[k][j - 1] = num / (d * dprod[k]);
        }
    }
    return mt;
}

template <class R>
SpectralDecomposition<R> decomposition(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N) {
    using std::abs;
    using std::isfinite;
    if (N < 0) throw InvalidInput("N: must be >= 0");
    const int p = gen.p();
    if (ic.p != p) throw InvalidInput("C: initial conditions built for a different p");
    const auto alpha = alpha_vector<R>(gen, std::max(gen.required_for(N), script_L_requirement(p)));
    const auto T = assemble<R>(p, alpha, N);
    const auto lev = eigen_levels(T);

    SpectralDecomposition<R> sd;
    sd.p = p;
    sd.N = N;
    sd.lambda = lev.top();
    sd.count_fallbacks = lev.count_fallbacks;
    sd.interlace_ties = lev.interlace_ties;
    sd.min_interlace_gap = lev.min_interlace_gap;
    sd.min_level_gap = lev.min_level_gap;

    const std::size_t M = sd.lambda.size();
    sd.right.assign(M, {});
    sd.left.assign(M, {});
    sd.dB.assign(M, R(0));
    for (std::size_t k = 0; k < M; ++k) {
        const auto b = eval_type_II(T, sd.lambda[k], N + 1);
        sd.right[k].assign(b.B.begin(), b.B.begin() + (N + 1));
        sd.dB[k] = b.dB[N + 1];
        const R tiny = R(1e-280);
        if (!(abs(sd.dB[k]) > tiny) || !(abs(sd.dB[k]) < R(1e280)))
            throw NumericError("ill-conditioned-spectrum", "|B'_{N+1}(lambda_k)| outside the representable guard",
                               "k = " + std::to_string(k) + ", lambda = " + show(sd.lambda[k]));
        const auto tr = eval_truncated(T, N, sd.lambda[k]);
        sd.left[k].resize(static_cast<std::size_t>(N + 1));
        for (int n = 1; n <= N + 1; ++n) sd.left[k][n - 1] = tr[n] / sd.dB[k];
    }

    const auto mt = christoffel_unscaled(p, alpha, N, sd.lambda);
    sd.mu.assign(M, std::vector<R>(static_cast<std::size_t>(p), R(0)));
    for (std::size_t k = 0; k < M; ++k)
        for (int a = 0; a < p; ++a)
            for (int j = 0; j <= a; ++j) sd.mu[k][a] += mt[k][j] * ic.C[j][a];

    R worst(0);
    for (std::size_t l = 0; l < M; ++l)
        for (std::size_t c = 0; c < M; ++c) {
            R s(0);
            for (std::size_t j = 0; j < M; ++j) s += sd.right[j][l] * sd.left[j][c];
            const R r = abs(s - (l == c ? R(1) : R(0)));
            if (r > worst) worst = r;
        }
    sd.uw_residual = worst;
    return sd;
}

template <class R> PositivityReport<R> verify_positivity(const GeneratorSequence& gen, const Matrix<R>& C, int N) {
    PositivityReport<R> rep;
    try {
        validate_C(C, gen.p(), false);
    } catch (const InvalidInput&) {
        rep.hypothesis_holds = false;
    }
    const auto ic = initial_conditions<R>(gen, C, true);
    const auto sd = decomposition(gen, ic, N);
    bool first = true;
    for (const auto& row : sd.mu)
        for (const auto& m : row)
            if (first || m < rep.min_weight) { rep.min_weight = m; first = false; }
    rep.positive = rep.min_weight > R(0);
    return rep;
}

template <class R>
R biorthogonality_residual(const GeneratorSequence& gen, const InitialConditionData<R>& ic, const SpectralDecomposition<R>& sd) {
    using std::abs;
    const int p = sd.p, N = sd.N;
    const int top = std::max(N, p - 1);
    const auto T = assemble_truncation<R>(gen, top);
    const std::size_t M = sd.lambda.size();
    // forms[j][k] = sum_a A^(a)_k(lambda_j) mu_{j,a}
    Matrix<R> forms(M, std::vector<R>(static_cast<std::size_t>(N + 1), R(0)));
    for (std::size_t j = 0; j < M; ++j) {
        const auto A = eval_type_I(T, ic, sd.lambda[j], top);
        for (int k = 0; k <= N; ++k)
            for (int a = 0; a < p; ++a) forms[j][k] += A[a][k] * sd.mu[j][a];
    }
    R worst(0);
    for (int k = 0; k <= N; ++k)
        for (int l = 0; l <= N; ++l) {
            R s(0);
            for (std::size_t j = 0; j < M; ++j) s += forms[j][k] * sd.right[j][l];
            const R r = abs(s - (k == l ? R(1) : R(0)));
            if (r > worst) worst = r;
        }
    return worst;
}

template <class R> R verify_biorthogonality(const GeneratorSequence& gen, const InitialConditionData<R>& ic, int N) {
    return biorthogonality_residual(gen, ic, decomposition(gen, ic, N));
}

template <class R> std::vector<R> embedded_nu_column(const InitialConditionData<R>& ic, int a, int size) {
    std::vector<R> e(static_cast<std::size_t>(size), R(0));
    for (int i = 0; i < std::min(size, ic.p); ++i) e[i] = ic.nu_inv_t[i][a - 1];
    return e;
}

template <class R, class V>
WeylValues<V> weyl(const GeneratorSequence& gen, const InitialConditionData<R>& ic, const SpectralDecomposition<R>& sd,
                   int a, const V& z) {
    using linalg::abs_value;
    if (a < 1 || a > sd.p) throw InvalidInput("measure index a outside 1..p");
    for (const auto& l : sd.lambda) {
        const auto gap = abs_value(V(z - V(l)));
        const auto lim = std::max(R(1), R(abs_value(l))) * R(1e-12);
        if (!(R(gap) > lim)) throw NumericError("pole", "z coincides with a node", "lambda = " + show(l));
    }
    const auto T = assemble_truncation<R>(gen, sd.N);
    WeylValues<V> w;
    const auto bk = second_kind(T, ic, sd.N, z);
    const auto b = eval_type_II(T, z, sd.N + 1);
    w.ratio = bk[a - 1] / b.B[sd.N + 1];
    w.partial = V(0);
    for (std::size_t k = 0; k < sd.lambda.size(); ++k) w.partial += V(sd.mu[k][a - 1]) / (z - V(sd.lambda[k]));
    const auto e = embedded_nu_column(ic, a, sd.N + 1);
    std::vector<V> rhs(e.begin(), e.end());
    w.resolvent = linalg::shifted_band_solve(T, z, rhs)[0];
    auto rel = [](const V& u, const V& v) {
        const double den = std::max(to_double(R(abs_value(v))), 1e-300);
        return to_double(R(abs_value(V(u - v)))) / den;
    };
    w.max_rel_diff = std::max(rel(w.partial, w.ratio), rel(w.resolvent, w.ratio));
    return w;
}

template <class R>
MomentValue<R> moments(const GeneratorSequence& gen, const InitialConditionData<R>& ic, const SpectralDecomposition<R>& sd,
                       int n, int a) {
    using std::abs;
    if (n < 0) throw InvalidInput("moment power n must be >= 0");
    if (a < 1 || a > sd.p) throw InvalidInput("measure index a outside 1..p");
    const auto T = assemble_truncation<R>(gen, sd.N);
    auto y = embedded_nu_column(ic, a, sd.N + 1);
    std::vector<R> z(y.size());
    for (int i = 0; i < n; ++i) {
        kernels::matvec(T, y.data(), z.data());
        std::swap(y, z);
    }
    MomentValue<R> m;
    m.matrix = y[0];
    m.spectral = R(0);
    for (std::size_t k = 0; k < sd.lambda.size(); ++k) {
        R pw(1);
        for (int i = 0; i < n; ++i) pw *= sd.lambda[k];
        m.spectral += sd.mu[k][a - 1] * pw;
    }
    m.rel_diff = abs(m.spectral - m.matrix) / std::max(abs(m.matrix), R(1e-300));
    return m;
}

template <class R> R DiscreteMeasureSet<R>::psi(int a, const R& x) const {
    R s(0);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (nodes[k] <= x) s += weights[a - 1][k];
    return s;
}

template <class R> DiscreteMeasureSet<R> measures(const SpectralDecomposition<R>& sd) {
    DiscreteMeasureSet<R> m;
    m.nodes = sd.lambda;
    m.weights.assign(static_cast<std::size_t>(sd.p), std::vector<R>(sd.lambda.size()));
    m.total_mass.assign(static_cast<std::size_t>(sd.p), R(0));
    for (int a = 0; a < sd.p; ++a)
        for (std::size_t k = 0; k < sd.lambda.size(); ++k) {
            m.weights[a][k] = sd.mu[k][a];
            m.total_mass[a] += sd.mu[k][a];
        }
    return m;
}

template <class R> SignChanges sign_changes(const std::vector<R>& v, double zero_tol) {
    using std::abs;
    R mx(0);
    for (const auto& x : v) mx = std::max(mx, R(abs(x)));
    const R thr = mx * R(zero_tol);
    SignChanges sc;
    int last = 0;
    // best[s]: max changes so far ending with sign s (0: +, 1: -), -1 if impossible
    int best[2] = {0, 0};
    bool started = false;
    for (const auto& x : v) {
        const bool zero = !(abs(x) > thr);
        if (!zero) {
            const int s = x > R(0) ? 1 : -1;
            if (last != 0 && s != last) ++sc.v_min;
            last = s;
        }
        int nb[2];
        for (int s = 0; s < 2; ++s) {
            const bool allowed = zero || (s == 0) == (x > R(0));
            if (!allowed) { nb[s] = -1; continue; }
            if (!started) { nb[s] = 0; continue; }
            int b = -1;
            if (best[s] >= 0) b = best[s];
            if (best[1 - s] >= 0) b = std::max(b, best[1 - s] + 1);
            nb[s] = b;
        }
        best[0] = nb[0];
        best[1] = nb[1];
        started = true;
    }
    sc.v_max = std::max(best[0], best[1]);
    if (sc.v_max < 0) sc.v_max = 0;
    return sc;
}

LimitEstimate estimate_limit(const std::function<double(int)>& f, int N0, double tol, int N_max) {
    LimitEstimate est;
    for (int N = std::max(N0, 1); N <= N_max; N *= 2) {
        est.orders.push_back(N);
        est.values.push_back(f(N));
        const std::size_t m = est.values.size();
        if (m >= 2 && std::abs(est.values[m - 1] - est.values[m - 2]) < tol) {
            est.status = LimitEstimate::Status::Converged;
            break;
        }
    }
    if (!est.values.empty()) est.value = est.values.back();
    return est;
}

std::string limit_status_name(LimitEstimate::Status s) {
    return s == LimitEstimate::Status::Converged ? "converged" : "inconclusive";
}

#define MULTIHESS_INSTANTIATE(R)                                                                                   \
    template EigenLevels<R> eigen_levels<R>(const BandedHessenberg<R>&);                                           \
    template std::vector<R> eigenvalues<R>(const GeneratorSequence&, int);                                         \
    template Matrix<R> christoffel_unscaled<R>(int, const std::vector<R>&, int, const std::vector<R>&);            \
    template SpectralDecomposition<R> decomposition<R>(const GeneratorSequence&, const InitialConditionData<R>&, int); \
    template PositivityReport<R> verify_positivity<R>(const GeneratorSequence&, const Matrix<R>&, int);            \
    template R verify_biorthogonality<R>(const GeneratorSequence&, const InitialConditionData<R>&, int);           \
    template R biorthogonality_residual<R>(const GeneratorSequence&, const InitialConditionData<R>&,               \
                                           const SpectralDecomposition<R>&);                                      \
    template WeylValues<R> weyl<R, R>(const GeneratorSequence&, const InitialConditionData<R>&,                    \
                                      const SpectralDecomposition<R>&, int, const R&);                            \
    template MomentValue<R> moments<R>(const GeneratorSequence&, const InitialConditionData<R>&,                   \
                                       const SpectralDecomposition<R>&, int, int);                                \
    template std::vector<R> embedded_nu_column<R>(const InitialConditionData<R>&, int, int);                       \
    template struct DiscreteMeasureSet<R>;                                                                         \
    template DiscreteMeasureSet<R> measures<R>(const SpectralDecomposition<R>&);                                   \
    template SignChanges sign_changes<R>(const std::vector<R>&, double);

MULTIHESS_INSTANTIATE(double)
MULTIHESS_INSTANTIATE(extended)
template WeylValues<std::complex<double>> weyl<double, std::complex<double>>(const GeneratorSequence&,
                                                                             const InitialConditionData<double>&,
                                                                             const SpectralDecomposition<double>&, int,
                                                                             const std::complex<double>&);

}  // namespace multihess
