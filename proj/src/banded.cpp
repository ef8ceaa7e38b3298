#include "multihess/banded.hpp"

#include "multihess/errors.hpp"
#include "multihess/real.hpp"

#include <algorithm>
#include <string>

namespace multihess {

template <class R> BandedHessenberg<R> BandedHessenberg<R>::leading(int n) const {
    if (n < 0 || n > N_) throw InvalidInput("leading: order " + std::to_string(n) + " outside 0.." + std::to_string(N_));
    BandedHessenberg out(p_, n);
    for (int d = 0; d <= p_; ++d)
        for (int i = 0; i <= n; ++i) out.diag_[d][i] = diag_[d][i];
    return out;
}

template <class R> BandedHessenberg<R> BandedHessenberg<R>::trailing(int k) const {
    if (k < 0 || k > N_) throw InvalidInput("trailing: cannot drop " + std::to_string(k) + " rows");
    BandedHessenberg out(p_, N_ - k);
    for (int d = 0; d <= p_; ++d)
        for (int i = d; i <= N_ - k; ++i) out.diag_[d][i] = diag_[d][i + k];
    return out;
}

template <class R> R BandedHessenberg<R>::max_row_sum() const {
    using std::abs;
    R best(0);
    for (int i = 0; i <= N_; ++i) {
        R s = (i < N_) ? R(1) : R(0);
        for (int d = 0; d <= std::min(p_, i); ++d) s += abs(diag_[d][i]);
        if (s > best) best = s;
    }
    return best;
}

template <class R> Matrix<R> BandedHessenberg<R>::dense() const {
    Matrix<R> M(N_ + 1, std::vector<R>(N_ + 1, R(0)));
    for (int i = 0; i <= N_; ++i)
        for (int j = 0; j <= N_; ++j) M[i][j] = (*this)(i, j);
    return M;
}

namespace {

// Factor sequence entry: 0 = U, k >= 1 = L_k.
template <class R> struct RowWork {
    int p;
    const std::vector<R>& a;
    int N;

    R lower(int k, int j) const {  // (L_k)_{j+1,j}
        return a[static_cast<std::size_t>(k + j * (p + 1))];  // alpha_{k+1+j(p+1)}
    }
    R upper(int j) const { return a[static_cast<std::size_t>(j * (p + 1))]; }  // alpha_{1+j(p+1)}

    void need(int row) const {
        // the row touches U_{row,row} and (L_k)_{row,row-1}; plus the next U if a product continues past it
        const std::size_t req = 1 + static_cast<std::size_t>(p + 1) * static_cast<std::size_t>(row);
        if (a.size() < req)
            throw InvalidInput("generator too short: " + std::to_string(req) + " alphas required, have " +
                               std::to_string(a.size()));
    }

    // Row i of the product of factors in `order`, columns i-p .. i+1 (offset base i-p),
    // entries with column > N dropped after every factor.
    std::vector<R> row(int i, const std::vector<int>& order) const {
        std::vector<R> v(static_cast<std::size_t>(p + 2), R(0));
        const int base = i - p;
        v[static_cast<std::size_t>(p)] = R(1);
        for (int f : order) {
            if (f == 0) {
                // (vU)_j = v_j U_jj + v_{j-1}
                for (int c = std::min(i + 1, N); c >= std::max(base, 0); --c) {
                    const std::size_t o = static_cast<std::size_t>(c - base);
                    R acc = (c <= N && c <= i) ? v[o] * upper(c) : R(0);
                    if (c - 1 >= base && c - 1 >= 0) acc += v[o - 1];
                    v[o] = acc;
                }
            } else {
                // (vL)_j = v_j + v_{j+1} (L)_{j+1,j}
                for (int c = std::max(base, 0); c <= std::min(i + 1, N); ++c) {
                    const std::size_t o = static_cast<std::size_t>(c - base);
                    if (c + 1 <= std::min(i + 1, N)) v[o] += v[o + 1] * lower(f, c);
                }
            }
        }
        return v;
    }
};

std::vector<int> factor_order(int p, int k) {
    // L_{k+1} .. L_p U L_1 .. L_k
    std::vector<int> order;
    for (int m = k + 1; m <= p; ++m) order.push_back(m);
    order.push_back(0);
    for (int m = 1; m <= k; ++m) order.push_back(m);
    return order;
}

template <class R> BandedHessenberg<R> product_band(int p, const std::vector<R>& alpha, int N, int k) {
    if (p < 1) throw InvalidInput("p: must be positive");
    if (N < 0) throw InvalidInput("N: must be >= 0");
    RowWork<R> w{p, alpha, N};
    w.need(N);
    const auto order = factor_order(p, k);
    BandedHessenberg<R> T(p, N);
    for (int i = 0; i <= N; ++i) {
        const auto v = w.row(i, order);
        for (int d = 0; d <= std::min(p, i); ++d) T.sub(i, d) = v[static_cast<std::size_t>(p - d)];
    }
    return T;
}

}  // namespace

template <class R> BidiagonalFactors<R> bidiagonal_factors(int p, const std::vector<R>& alpha, int N) {
    RowWork<R> w{p, alpha, N};
    w.need(N);
    BidiagonalFactors<R> f;
    f.p = p;
    f.N = N;
    f.lower.assign(static_cast<std::size_t>(p), std::vector<R>(static_cast<std::size_t>(N + 1), R(0)));
    f.upper.assign(static_cast<std::size_t>(N + 1), R(0));
    for (int j = 0; j <= N; ++j) f.upper[j] = w.upper(j);
    for (int k = 1; k <= p; ++k)
        for (int j = 1; j <= N; ++j) f.lower[k - 1][j] = w.lower(k, j - 1);
    return f;
}

template <class R> BandedHessenberg<R> assemble(int p, const std::vector<R>& alpha, int N) {
    return product_band(p, alpha, N, 0);
}

template <class R> BandedHessenberg<R> assemble_truncation(const GeneratorSequence& gen, int N) {
    if (N < 0) throw InvalidInput("N: must be >= 0");
    return assemble<R>(gen.p(), alpha_vector<R>(gen, gen.required_for(N)), N);
}

double entry(const GeneratorSequence& gen, int i, int j) {
    if (i < 0 || j < 0) throw InvalidInput("entry: negative index");
    if (j == i + 1) return 1.0;
    const int p = gen.p();
    if (j > i + 1 || i - j > p) return 0.0;
    const int N = i;
    const auto a = alpha_vector<double>(gen, gen.required_for(N));
    RowWork<double> w{p, a, N};
    const auto v = w.row(i, factor_order(p, 0));
    return v[static_cast<std::size_t>(j - (i - p))];
}

template <class R> BandedHessenberg<R> darboux(int p, const std::vector<R>& alpha, int N, int k) {
    if (k < 1 || k > p)
        throw InvalidInput("darboux: shift k=" + std::to_string(k) + " outside 1.." + std::to_string(p));
    return product_band(p, alpha, N, k);
}

template <class R> BandedHessenberg<R> darboux(const GeneratorSequence& gen, int N, int k) {
    return darboux<R>(gen.p(), alpha_vector<R>(gen, gen.required_for(N)), N, k);
}

template <class R> BandedHessenberg<R> cyclic_product(int p, const std::vector<R>& alpha, int N, int k) {
    if (k < 0 || k > p) throw InvalidInput("cyclic_product: shift outside 0..p");
    return product_band(p, alpha, N, k);
}

template <class R> R subdiagonal_product(const BandedHessenberg<R>& T, int n) {
    if (n - 1 + T.p() > T.order() && n > 0)
        throw InvalidInput("H_" + std::to_string(n) + " needs order >= " + std::to_string(n - 1 + T.p()));
    R h(1);
    for (int i = 0; i < n; ++i) h *= T.lowest(i);
    return h;
}

template <class R> R signed_subdiagonal_product(const BandedHessenberg<R>& T, int n) {
    R h = subdiagonal_product(T, n);
    if (((T.p() - 1) * n) % 2 != 0) h = -h;
    return h;
}

template <class R> void band_matvec_ref(const BandedHessenberg<R>& T, const R* x, R* y) {
    const int N = T.order();
    const int p = T.p();
    for (int i = 0; i <= N; ++i) {
        R acc = T.sub(i, 0) * x[i];
        for (int d = 1; d <= p && d <= i; ++d) acc += T.sub(i, d) * x[i - d];
        if (i < N) acc += x[i + 1];
        y[i] = acc;
    }
}

template <class R> void band_vecmat_ref(const BandedHessenberg<R>& T, const R* x, R* y) {
    const int N = T.order();
    const int p = T.p();
    for (int j = 0; j <= N; ++j) {
        R acc = x[j] * T.sub(j, 0);
        for (int d = 1; d <= p && j + d <= N; ++d) acc += x[j + d] * T.sub(j + d, d);
        if (j > 0) acc += x[j - 1];
        y[j] = acc;
    }
}

#define MULTIHESS_INSTANTIATE(R)                                                              \
    template class BandedHessenberg<R>;                                                       \
    template BidiagonalFactors<R> bidiagonal_factors<R>(int, const std::vector<R>&, int);     \
    template BandedHessenberg<R> assemble<R>(int, const std::vector<R>&, int);                \
    template BandedHessenberg<R> assemble_truncation<R>(const GeneratorSequence&, int);       \
    template BandedHessenberg<R> darboux<R>(int, const std::vector<R>&, int, int);            \
    template BandedHessenberg<R> darboux<R>(const GeneratorSequence&, int, int);              \
    template BandedHessenberg<R> cyclic_product<R>(int, const std::vector<R>&, int, int);     \
    template R subdiagonal_product<R>(const BandedHessenberg<R>&, int);                       \
    template R signed_subdiagonal_product<R>(const BandedHessenberg<R>&, int);                \
    template void band_matvec_ref<R>(const BandedHessenberg<R>&, const R*, R*);               \
    template void band_vecmat_ref<R>(const BandedHessenberg<R>&, const R*, R*);

MULTIHESS_INSTANTIATE(double)
MULTIHESS_INSTANTIATE(extended)

}  // namespace multihess
