#pragma once

#include "multihess/banded.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace multihess::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
// Auto-selected at first use; MULTIHESS_ISA=scalar|avx2 or force() overrides.
Isa active();
void force(Isa isa);
std::string isa_name(Isa isa);

// Powers of two used to rescale the recurrence window (exact in binary floating point).
template <class R> inline R scale_big() { using std::ldexp; return ldexp(R(1), 600); }
template <class R> inline R scale_small() { using std::ldexp; return ldexp(R(1), -600); }

// Last value of the type II recurrence on rows 0..n of T at x, with derivative, both
// multiplied by the same power of two (ratio and sign are exact), and the number of sign
// changes in B_0(x), ..., B_{n+1}(x) (zeros skipped).
template <class R>
void eval_last_ref(const BandedHessenberg<R>& T, int n, const R& x, R& value, R& deriv, int& changes) {
    using std::abs;
    const int p = T.p();
    const int w = p + 1;
    std::vector<R> B(static_cast<std::size_t>(w), R(0)), D(static_cast<std::size_t>(w), R(0));
    const R big = scale_big<R>(), small = scale_small<R>();
    const R neg_big = -big;
    B[0] = R(1);
    int cnt = 0;
    bool last_neg = false;
    for (int m = 0; m <= n; ++m) {
        const std::size_t cur = static_cast<std::size_t>(m % w);
        const R t = x - T.sub(m, 0);
        R nb = t * B[cur];
        R nd = t * D[cur];
        nd += B[cur];
        for (int d = 1; d <= p && d <= m; ++d) {
            const std::size_t o = static_cast<std::size_t>((m - d) % w);
            const R& c = T.sub(m, d);
            nb -= c * B[o];
            nd -= c * D[o];
        }
        if (nb > big || nb < neg_big || nd > big || nd < neg_big) {
            for (int k = 0; k < w; ++k) {
                B[static_cast<std::size_t>(k)] = B[static_cast<std::size_t>(k)] * small;
                D[static_cast<std::size_t>(k)] = D[static_cast<std::size_t>(k)] * small;
            }
            nb = nb * small;
            nd = nd * small;
        }
        if (nb != R(0)) {
            const bool neg = nb < R(0);
            if (neg != last_neg) ++cnt;
            last_neg = neg;
        }
        const std::size_t nxt = static_cast<std::size_t>((m + 1) % w);
        B[nxt] = nb;
        D[nxt] = nd;
    }
    const std::size_t fin = static_cast<std::size_t>((n + 1) % w);
    value = B[fin];
    deriv = D[fin];
    changes = cnt;
}

// Batched version for double, dispatched to scalar or AVX2; results identical bit for bit.
void eval_last(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count, double* value,
               double* deriv, int* changes);

// y = T x and y = x T
void band_matvec(const BandedHessenberg<double>& T, const double* x, double* y);
void band_vecmat(const BandedHessenberg<double>& T, const double* x, double* y);

namespace scalar {
void eval_last(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count, double* value,
               double* deriv, int* changes);
void band_matvec(const BandedHessenberg<double>& T, const double* x, double* y);
void band_vecmat(const BandedHessenberg<double>& T, const double* x, double* y);
}  // namespace scalar

namespace avx2 {
void eval_last(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count, double* value,
               double* deriv, int* changes);
void band_matvec(const BandedHessenberg<double>& T, const double* x, double* y);
void band_vecmat(const BandedHessenberg<double>& T, const double* x, double* y);
}  // namespace avx2

// Generic front doors: extended precision always takes the scalar templates.
template <class R> inline void matvec(const BandedHessenberg<R>& T, const R* x, R* y) { band_matvec_ref(T, x, y); }
template <> inline void matvec<double>(const BandedHessenberg<double>& T, const double* x, double* y) {
    band_matvec(T, x, y);
}
template <class R> inline void vecmat(const BandedHessenberg<R>& T, const R* x, R* y) { band_vecmat_ref(T, x, y); }
template <> inline void vecmat<double>(const BandedHessenberg<double>& T, const double* x, double* y) {
    band_vecmat(T, x, y);
}
template <class R>
inline void last_batch(const BandedHessenberg<R>& T, int n, const R* xs, std::size_t count, R* value, R* deriv,
                       int* changes) {
    for (std::size_t i = 0; i < count; ++i) eval_last_ref(T, n, xs[i], value[i], deriv[i], changes[i]);
}
template <>
inline void last_batch<double>(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count,
                               double* value, double* deriv, int* changes) {
    eval_last(T, n, xs, count, value, deriv, changes);
}

}  // namespace multihess::kernels
