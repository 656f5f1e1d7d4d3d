#include "heckelab/kernels.hpp"

#include <cstdlib>

namespace heckelab::kernels {

namespace {

Isa detect() {
    if (std::getenv("HECKELAB_FORCE_SCALAR") != nullptr) return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool avx2_available() {
#if defined(HECKELAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = detect();
    return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void dot_batch(const std::int32_t* const* cols, const std::int32_t* w, std::size_t ncols,
               std::size_t count, std::int32_t q, std::int32_t* out) {
#if defined(HECKELAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return dot_batch_avx2(cols, w, ncols, count, q, out);
#endif
    dot_batch_scalar(cols, w, ncols, count, q, out);
}

void axpy(std::int32_t* y, const std::int32_t* x, std::int32_t f, std::size_t n, std::int32_t q) {
#if defined(HECKELAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return axpy_avx2(y, x, f, n, q);
#endif
    axpy_scalar(y, x, f, n, q);
}

}  // namespace heckelab::kernels
