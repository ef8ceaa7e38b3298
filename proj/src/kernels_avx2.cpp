// Built with -mavx2 only (no FMA) so every lane follows the scalar operation sequence exactly.
#include "multihess/kernels.hpp"

#include <immintrin.h>

#include <cstdint>
#include <vector>

namespace multihess::kernels::avx2 {

namespace {

struct Lane {
    __m256d v;
};

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void scalar_row_matvec(const BandedHessenberg<double>& T, const double* x, double* y, int i) {
    const int N = T.order(), p = T.p();
    double acc = T.sub(i, 0) * x[i];
    for (int d = 1; d <= p && d <= i; ++d) acc += T.sub(i, d) * x[i - d];
    if (i < N) acc += x[i + 1];
    y[i] = acc;
}

void scalar_col_vecmat(const BandedHessenberg<double>& T, const double* x, double* y, int j) {
    const int N = T.order(), p = T.p();
    double acc = x[j] * T.sub(j, 0);
    for (int d = 1; d <= p && j + d <= N; ++d) acc += x[j + d] * T.sub(j + d, d);
    if (j > 0) acc += x[j - 1];
    y[j] = acc;
}

}  // namespace

void eval_last(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count, double* value,
               double* deriv, int* changes) {
    const int p = T.p();
    const int w = p + 1;
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d big = _mm256_set1_pd(scale_big<double>());
    const __m256d small = _mm256_set1_pd(scale_small<double>());
    std::vector<Lane> B(static_cast<std::size_t>(w)), D(static_cast<std::size_t>(w));
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d x = _mm256_loadu_pd(xs + i);
        for (auto& b : B) b.v = zero;
        for (auto& d : D) d.v = zero;
        B[0].v = one;
        __m256i cnt = _mm256_setzero_si256();
        __m256d last_neg = zero;
        for (int m = 0; m <= n; ++m) {
            const std::size_t cur = static_cast<std::size_t>(m % w);
            const __m256d t = _mm256_sub_pd(x, _mm256_set1_pd(T.sub(m, 0)));
            __m256d nb = _mm256_mul_pd(t, B[cur].v);
            __m256d nd = _mm256_mul_pd(t, D[cur].v);
            nd = _mm256_add_pd(nd, B[cur].v);
            for (int d = 1; d <= p && d <= m; ++d) {
                const std::size_t o = static_cast<std::size_t>((m - d) % w);
                const __m256d c = _mm256_set1_pd(T.sub(m, d));
                nb = _mm256_sub_pd(nb, _mm256_mul_pd(c, B[o].v));
                nd = _mm256_sub_pd(nd, _mm256_mul_pd(c, D[o].v));
            }
            const __m256d over = _mm256_or_pd(_mm256_cmp_pd(vabs(nb), big, _CMP_GT_OQ),
                                              _mm256_cmp_pd(vabs(nd), big, _CMP_GT_OQ));
            if (_mm256_movemask_pd(over) != 0) {
                const __m256d f = _mm256_blendv_pd(one, small, over);
                for (int k = 0; k < w; ++k) {
                    B[static_cast<std::size_t>(k)].v = _mm256_mul_pd(B[static_cast<std::size_t>(k)].v, f);
                    D[static_cast<std::size_t>(k)].v = _mm256_mul_pd(D[static_cast<std::size_t>(k)].v, f);
                }
                nb = _mm256_mul_pd(nb, f);
                nd = _mm256_mul_pd(nd, f);
            }
            const __m256d nz = _mm256_cmp_pd(nb, zero, _CMP_NEQ_UQ);
            const __m256d neg = _mm256_cmp_pd(nb, zero, _CMP_LT_OQ);
            const __m256d flip = _mm256_and_pd(nz, _mm256_xor_pd(neg, last_neg));
            cnt = _mm256_sub_epi64(cnt, _mm256_castpd_si256(flip));
            last_neg = _mm256_blendv_pd(last_neg, neg, nz);
            const std::size_t nxt = static_cast<std::size_t>((m + 1) % w);
            B[nxt].v = nb;
            D[nxt].v = nd;
        }
        const std::size_t fin = static_cast<std::size_t>((n + 1) % w);
        _mm256_storeu_pd(value + i, B[fin].v);
        _mm256_storeu_pd(deriv + i, D[fin].v);
        alignas(32) std::int64_t c[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(c), cnt);
        for (int k = 0; k < 4; ++k) changes[i + static_cast<std::size_t>(k)] = static_cast<int>(c[k]);
    }
    for (; i < count; ++i) eval_last_ref(T, n, xs[i], value[i], deriv[i], changes[i]);
}

void band_matvec(const BandedHessenberg<double>& T, const double* x, double* y) {
    const int N = T.order(), p = T.p();
    int i = 0;
    for (; i < p && i <= N; ++i) scalar_row_matvec(T, x, y, i);
    // rows p .. N-1 have every band term and the superdiagonal
    for (; i + 4 <= N; i += 4) {
        __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(T.diag(0).data() + i), _mm256_loadu_pd(x + i));
        for (int d = 1; d <= p; ++d)
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(T.diag(d).data() + i), _mm256_loadu_pd(x + i - d)));
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i + 1));
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i <= N; ++i) scalar_row_matvec(T, x, y, i);
}

void band_vecmat(const BandedHessenberg<double>& T, const double* x, double* y) {
    const int N = T.order(), p = T.p();
    int j = 0;
    if (N >= 0) scalar_col_vecmat(T, x, y, j++);
    // columns 1 .. N-p have every band term and the superdiagonal neighbour
    for (; j + 3 <= N - p; j += 4) {
        __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(T.diag(0).data() + j));
        for (int d = 1; d <= p; ++d)
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + j + d), _mm256_loadu_pd(T.diag(d).data() + j + d)));
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + j - 1));
        _mm256_storeu_pd(y + j, acc);
    }
    for (; j <= N; ++j) scalar_col_vecmat(T, x, y, j);
}

}  // namespace multihess::kernels::avx2
