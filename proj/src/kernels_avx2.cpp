// AVX2+FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma;
// only reached after the runtime dispatch check in kernels.cpp.

#include "cforge/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define CFORGE_X86 1
#else
#define CFORGE_X86 0
#endif

#if CFORGE_X86

#include <immintrin.h>

namespace cforge::kernels {
namespace {

void affine4_avx2(const Mat4& a, const double* x, const double* b, double* out) {
    __m256d acc = _mm256_loadu_pd(b);
    for (std::size_t c = 0; c < kLanes; ++c) {
        const __m256d col = _mm256_loadu_pd(&a.m[c * kLanes]);
        acc = _mm256_fmadd_pd(col, _mm256_set1_pd(x[c]), acc);
    }
    _mm256_storeu_pd(out, acc);
}

void rk4_combine_avx2(const double* x, const double* k1, const double* k2,
                      const double* k3, const double* k4, double h, double* out) {
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d s = _mm256_loadu_pd(k1);
    s = _mm256_fmadd_pd(two, _mm256_loadu_pd(k2), s);
    s = _mm256_fmadd_pd(two, _mm256_loadu_pd(k3), s);
    s = _mm256_add_pd(s, _mm256_loadu_pd(k4));
    const __m256d r = _mm256_fmadd_pd(_mm256_set1_pd(h / 6.0), s, _mm256_loadu_pd(x));
    _mm256_storeu_pd(out, r);
}

void axpy4_avx2(const double* x, double h, const double* k, double* out) {
    const __m256d r =
        _mm256_fmadd_pd(_mm256_set1_pd(h), _mm256_loadu_pd(k), _mm256_loadu_pd(x));
    _mm256_storeu_pd(out, r);
}

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double tail = 0;
    for (; i < n; ++i) tail += x[i];
    return hsum(acc) + tail;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double tail = 0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum(acc) + tail;
}

void minmax_avx2(const double* x, std::size_t n, double* mn, double* mx) {
    double lo = x[0], hi = x[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vlo = _mm256_loadu_pd(x);
        __m256d vhi = vlo;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(x + i);
            vlo = _mm256_min_pd(vlo, v);
            vhi = _mm256_max_pd(vhi, v);
        }
        alignas(32) double tmp[4];
        _mm256_store_pd(tmp, vlo);
        lo = tmp[0];
        for (int k = 1; k < 4; ++k)
            if (tmp[k] < lo) lo = tmp[k];
        _mm256_store_pd(tmp, vhi);
        hi = tmp[0];
        for (int k = 1; k < 4; ++k)
            if (tmp[k] > hi) hi = tmp[k];
    }
    for (; i < n; ++i) {
        if (x[i] < lo) lo = x[i];
        if (x[i] > hi) hi = x[i];
    }
    *mn = lo;
    *mx = hi;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{
        "avx2",     affine4_avx2, rk4_combine_avx2, axpy4_avx2,
        sum_avx2,   dot_avx2,     minmax_avx2,
    };
    return ops;
}

}  // namespace cforge::kernels

#else  // !CFORGE_X86

namespace cforge::kernels {

const Ops& avx2_ops() { return scalar_ops(); }

}  // namespace cforge::kernels

#endif
