#include "heckelab/kernels.hpp"

#include <immintrin.h>

namespace heckelab::kernels {

namespace {

// acc mod q for 8 non-negative lanes below 2^31. Quotient estimate in double is
// off by at most one, fixed by the two conditional corrections.
inline __m256i mod_lanes(__m256i acc, std::int32_t q, __m256d invq) {
    __m256d lo = _mm256_cvtepi32_pd(_mm256_castsi256_si128(acc));
    __m256d hi = _mm256_cvtepi32_pd(_mm256_extracti128_si256(acc, 1));
    __m128i qlo = _mm256_cvttpd_epi32(_mm256_floor_pd(_mm256_mul_pd(lo, invq)));
    __m128i qhi = _mm256_cvttpd_epi32(_mm256_floor_pd(_mm256_mul_pd(hi, invq)));
    __m256i quot = _mm256_set_m128i(qhi, qlo);
    __m256i vq = _mm256_set1_epi32(q);
    __m256i r = _mm256_sub_epi32(acc, _mm256_mullo_epi32(quot, vq));
    __m256i neg = _mm256_cmpgt_epi32(_mm256_setzero_si256(), r);
    r = _mm256_add_epi32(r, _mm256_and_si256(neg, vq));
    __m256i big = _mm256_cmpgt_epi32(r, _mm256_set1_epi32(q - 1));
    r = _mm256_sub_epi32(r, _mm256_and_si256(big, vq));
    return r;
}

}  // namespace

void dot_batch_avx2(const std::int32_t* const* cols, const std::int32_t* w,
                    std::size_t ncols, std::size_t count, std::int32_t q, std::int32_t* out) {
    // Each product is < q^2; reduce whenever the running sum could pass 2^31.
    const std::int64_t qq = std::int64_t(q - 1) * (q - 1);
    const std::size_t chunk = qq == 0 ? ncols : std::size_t(((std::int64_t(1) << 31) - q) / qq);
    const __m256d invq = _mm256_set1_pd(1.0 / q);
    std::size_t k = 0;
    for (; k + 8 <= count; k += 8) {
        __m256i acc = _mm256_setzero_si256();
        std::size_t since = 0;
        for (std::size_t c = 0; c < ncols; ++c) {
            __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(cols[c] + k));
            acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(x, _mm256_set1_epi32(w[c])));
            if (++since >= chunk) {
                acc = mod_lanes(acc, q, invq);
                since = 1;
            }
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + k), mod_lanes(acc, q, invq));
    }
    for (; k < count; ++k) {
        std::int64_t acc = 0;
        for (std::size_t c = 0; c < ncols; ++c) acc += std::int64_t(cols[c][k]) * w[c];
        out[k] = std::int32_t(acc % q);
    }
}

void axpy_avx2(std::int32_t* y, const std::int32_t* x, std::int32_t f, std::size_t n,
               std::int32_t q) {
    const __m256d invq = _mm256_set1_pd(1.0 / q);
    const __m256i vf = _mm256_set1_epi32(f);
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        __m256i vy = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + k));
        __m256i vx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + k));
        __m256i acc = _mm256_add_epi32(vy, _mm256_mullo_epi32(vx, vf));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(y + k), mod_lanes(acc, q, invq));
    }
    if (k < n) axpy_scalar(y + k, x + k, f, n - k, q);
}

}  // namespace heckelab::kernels
