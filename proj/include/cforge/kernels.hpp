#pragma once

// Numeric kernels for the simulator inner loop and waveform reductions.
//
// State vectors are padded to 4 lanes (the SEPIC state size); matrices are
// stored column-major so the affine map vectorizes as broadcast-and-FMA.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. The two are equivalence-
// tested against each other (see tests/test_kernels.cpp).

#include <array>
#include <cstddef>

namespace cforge::kernels {

inline constexpr std::size_t kLanes = 4;

using Vec4 = std::array<double, kLanes>;

/// 4x4 matrix, column-major: m[c * 4 + r].
struct Mat4 {
    std::array<double, kLanes * kLanes> m{};
    double& at(std::size_t r, std::size_t c) { return m[c * kLanes + r]; }
    double at(std::size_t r, std::size_t c) const { return m[c * kLanes + r]; }
};

struct Ops {
    const char* name;

    /// out = A*x + b
    void (*affine4)(const Mat4& a, const double* x, const double* b, double* out);

    /// out = x + (h/6) * (k1 + 2*k2 + 2*k3 + k4)
    void (*rk4_combine)(const double* x, const double* k1, const double* k2,
                        const double* k3, const double* k4, double h, double* out);

    /// out = x + h*k
    void (*axpy4)(const double* x, double h, const double* k, double* out);

    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*minmax)(const double* x, std::size_t n, double* mn, double* mx);
};

const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops();  // valid to call only when avx2_available()

/// Runtime-selected kernel set: AVX2 when the CPU supports it, scalar
/// otherwise. CONVERTER_FORGE_KERNELS=scalar|avx2 overrides the choice.
const Ops& active_ops();

}  // namespace cforge::kernels
