#include "multihess/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace multihess::kernels {

namespace {

constexpr int kUnset = -1;
std::atomic<int> g_isa{kUnset};

Isa detect() {
    if (const char* env = std::getenv("MULTIHESS_ISA")) {
        const std::string s(env);
        if (s == "scalar") return Isa::Scalar;
        if (s == "avx2" && avx2_available()) return Isa::Avx2;
    }
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool avx2_available() {
#if defined(MULTIHESS_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active() {
    int v = g_isa.load(std::memory_order_relaxed);
    if (v == kUnset) {
        v = static_cast<int>(detect());
        g_isa.store(v, std::memory_order_relaxed);
    }
    return static_cast<Isa>(v);
}

void force(Isa isa) {
    if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
    g_isa.store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace scalar {

void eval_last(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count, double* value,
               double* deriv, int* changes) {
    for (std::size_t i = 0; i < count; ++i) eval_last_ref(T, n, xs[i], value[i], deriv[i], changes[i]);
}

void band_matvec(const BandedHessenberg<double>& T, const double* x, double* y) { band_matvec_ref(T, x, y); }
void band_vecmat(const BandedHessenberg<double>& T, const double* x, double* y) { band_vecmat_ref(T, x, y); }

}  // namespace scalar

#ifndef MULTIHESS_HAVE_AVX2
namespace avx2 {
void eval_last(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count, double* value,
               double* deriv, int* changes) {
    scalar::eval_last(T, n, xs, count, value, deriv, changes);
}
void band_matvec(const BandedHessenberg<double>& T, const double* x, double* y) { scalar::band_matvec(T, x, y); }
void band_vecmat(const BandedHessenberg<double>& T, const double* x, double* y) { scalar::band_vecmat(T, x, y); }
}  // namespace avx2
#endif

void eval_last(const BandedHessenberg<double>& T, int n, const double* xs, std::size_t count, double* value,
               double* deriv, int* changes) {
    if (active() == Isa::Avx2) avx2::eval_last(T, n, xs, count, value, deriv, changes);
    else scalar::eval_last(T, n, xs, count, value, deriv, changes);
}

void band_matvec(const BandedHessenberg<double>& T, const double* x, double* y) {
    if (active() == Isa::Avx2) avx2::band_matvec(T, x, y);
    else scalar::band_matvec(T, x, y);
}

void band_vecmat(const BandedHessenberg<double>& T, const double* x, double* y) {
    if (active() == Isa::Avx2) avx2::band_vecmat(T, x, y);
    else scalar::band_vecmat(T, x, y);
}

}  // namespace multihess::kernels
