#include "ryd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace ryd::kernels {

#ifdef RYD_HAVE_AVX2
const KernelSet* avx2_kernels_impl();
#endif

const KernelSet* avx2_kernels() {
#ifdef RYD_HAVE_AVX2
    return avx2_kernels_impl();
#else
    return nullptr;
#endif
}

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(RYD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

const KernelSet& kernels_by_name(std::string_view name) {
    if (name == "avx2" && avx2_kernels() != nullptr && cpu_supports(Isa::avx2)) {
        return *avx2_kernels();
    }
    return scalar_kernels();
}

const KernelSet& active_kernels() {
    static const KernelSet& chosen = [] () -> const KernelSet& {
        if (const char* env = std::getenv("RYD_KERNELS")) return kernels_by_name(env);
        return kernels_by_name("avx2");
    }();
    return chosen;
}

} // namespace ryd::kernels
