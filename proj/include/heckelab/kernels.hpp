#pragma once

#include <cstddef>
#include <cstdint>

// Hot inner loops of the enumerators, with a scalar reference and an AVX2
// variant picked once at runtime. Residues are int32 in [0, q) with q < 2^15,
// so every product and partial sum fits in 32 bits before reduction.
namespace heckelab::kernels {

enum class Isa { Scalar, Avx2 };

// out[k] = sum_c cols[c][k] * w[c]  mod q, for k < count.
// cols is structure-of-arrays: cols[c] points at `count` residues.
using DotBatchFn = void (*)(const std::int32_t* const* cols, const std::int32_t* w,
                            std::size_t ncols, std::size_t count, std::int32_t q,
                            std::int32_t* out);

// y[k] = (y[k] + f * x[k]) mod q.
using AxpyFn = void (*)(std::int32_t* y, const std::int32_t* x, std::int32_t f,
                        std::size_t n, std::int32_t q);

void dot_batch_scalar(const std::int32_t* const* cols, const std::int32_t* w,
                      std::size_t ncols, std::size_t count, std::int32_t q, std::int32_t* out);
void axpy_scalar(std::int32_t* y, const std::int32_t* x, std::int32_t f, std::size_t n,
                 std::int32_t q);

#if defined(HECKELAB_HAVE_AVX2)
void dot_batch_avx2(const std::int32_t* const* cols, const std::int32_t* w,
                    std::size_t ncols, std::size_t count, std::int32_t q, std::int32_t* out);
void axpy_avx2(std::int32_t* y, const std::int32_t* x, std::int32_t f, std::size_t n,
               std::int32_t q);
#endif

// Selected once: AVX2 when compiled in and the CPU reports it, unless
// HECKELAB_FORCE_SCALAR is set in the environment.
Isa active_isa();
const char* isa_name(Isa isa);
bool avx2_available();

void dot_batch(const std::int32_t* const* cols, const std::int32_t* w, std::size_t ncols,
               std::size_t count, std::int32_t q, std::int32_t* out);
void axpy(std::int32_t* y, const std::int32_t* x, std::int32_t f, std::size_t n, std::int32_t q);

}  // namespace heckelab::kernels
