#include "cforge/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cforge::kernels {

bool avx2_available() {
#if (defined(__x86_64__) || defined(_M_X64) || defined(__i386__)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& active_ops() {
    static const Ops& ops = []() -> const Ops& {
        if (const char* force = std::getenv("CONVERTER_FORGE_KERNELS")) {
            if (std::strcmp(force, "scalar") == 0) return scalar_ops();
            if (std::strcmp(force, "avx2") == 0 && avx2_available()) return avx2_ops();
        }
        return avx2_available() ? avx2_ops() : scalar_ops();
    }();
    return ops;
}

}  // namespace cforge::kernels
