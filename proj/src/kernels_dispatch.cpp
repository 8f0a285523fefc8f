#include "pag/kernels.hpp"

namespace pag::kernels {

#if PAG_HAVE_AVX2
const Kernels* avx2_impl();  // defined in kernels_avx2.cpp
#endif

const Kernels* avx2() {
#if PAG_HAVE_AVX2
    if (__builtin_cpu_supports("avx2")) return avx2_impl();
#endif
    return nullptr;
}

const Kernels& active() {
    static const Kernels* chosen = [] {
        if (const Kernels* k = avx2()) return k;
        return &scalar();
    }();
    return *chosen;
}

}  // namespace pag::kernels
