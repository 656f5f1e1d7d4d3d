#include "heckelab/kernels.hpp"

namespace heckelab::kernels {

void dot_batch_scalar(const std::int32_t* const* cols, const std::int32_t* w,
                      std::size_t ncols, std::size_t count, std::int32_t q, std::int32_t* out) {
    for (std::size_t k = 0; k < count; ++k) {
        std::int64_t acc = 0;
        for (std::size_t c = 0; c < ncols; ++c) acc += std::int64_t(cols[c][k]) * w[c];
        out[k] = std::int32_t(acc % q);
    }
}

void axpy_scalar(std::int32_t* y, const std::int32_t* x, std::int32_t f, std::size_t n,
                 std::int32_t q) {
    for (std::size_t k = 0; k < n; ++k)
        y[k] = std::int32_t((y[k] + std::int64_t(f) * x[k]) % q);
}

}  // namespace heckelab::kernels
