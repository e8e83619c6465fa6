#include "cforge/kernels.hpp"

namespace cforge::kernels {
namespace {

void affine4_scalar(const Mat4& a, const double* x, const double* b, double* out) {
    // Column order matches the AVX2 accumulation order so results track the
    // vector path as closely as FMA rounding allows.
    for (std::size_t r = 0; r < kLanes; ++r) out[r] = b[r];
    for (std::size_t c = 0; c < kLanes; ++c) {
        const double xc = x[c];
        const double* col = &a.m[c * kLanes];
        for (std::size_t r = 0; r < kLanes; ++r) out[r] += col[r] * xc;
    }
}

void rk4_combine_scalar(const double* x, const double* k1, const double* k2,
                        const double* k3, const double* k4, double h, double* out) {
    const double w = h / 6.0;
    for (std::size_t r = 0; r < kLanes; ++r)
        out[r] = x[r] + w * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
}

void axpy4_scalar(const double* x, double h, const double* k, double* out) {
    for (std::size_t r = 0; r < kLanes; ++r) out[r] = x[r] + h * k[r];
}

double sum_scalar(const double* x, std::size_t n) {
    // Four partial accumulators, same association as the 4-lane vector path.
    double acc[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += x[i];
        acc[1] += x[i + 1];
        acc[2] += x[i + 2];
        acc[3] += x[i + 3];
    }
    double tail = 0;
    for (; i < n; ++i) tail += x[i];
    return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += x[i] * y[i];
        acc[1] += x[i + 1] * y[i + 1];
        acc[2] += x[i + 2] * y[i + 2];
        acc[3] += x[i + 3] * y[i + 3];
    }
    double tail = 0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}

void minmax_scalar(const double* x, std::size_t n, double* mn, double* mx) {
    double lo = x[0], hi = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] < lo) lo = x[i];
        if (x[i] > hi) hi = x[i];
    }
    *mn = lo;
    *mx = hi;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",        affine4_scalar, rk4_combine_scalar,
        axpy4_scalar,    sum_scalar,     dot_scalar,
        minmax_scalar,
    };
    return ops;
}

}  // namespace cforge::kernels
