#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "heckelab/kernels.hpp"

using namespace heckelab::kernels;

namespace {

struct Batch {
    std::vector<std::vector<std::int32_t>> cols;
    std::vector<const std::int32_t*> ptrs;
    std::vector<std::int32_t> w;
};

Batch random_batch(std::size_t ncols, std::size_t count, std::int32_t q, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int32_t> e(0, q - 1);
    Batch b;
    b.cols.assign(ncols, std::vector<std::int32_t>(count));
    for (auto& c : b.cols)
        for (auto& x : c) x = e(rng);
    for (const auto& c : b.cols) b.ptrs.push_back(c.data());
    for (std::size_t i = 0; i < ncols; ++i) b.w.push_back(e(rng));
    return b;
}

std::vector<std::int32_t> naive_dot(const Batch& b, std::size_t count, std::int32_t q) {
    std::vector<std::int32_t> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::int64_t s = 0;
        for (std::size_t c = 0; c < b.cols.size(); ++c) s += std::int64_t(b.cols[c][k]) * b.w[c];
        out[k] = std::int32_t(s % q);
    }
    return out;
}

const std::int32_t kModuli[] = {2, 3, 4, 5, 9, 25, 49, 121, 169, 32749};
const std::size_t kCounts[] = {0, 1, 7, 8, 9, 31, 64, 1000};

}  // namespace

TEST(Kernels, ScalarDotMatchesNaive) {
    std::mt19937_64 rng(1);
    for (auto q : kModuli)
        for (auto count : kCounts)
            for (std::size_t ncols : {1u, 3u, 6u, 8u}) {
                const Batch b = random_batch(ncols, count, q, rng);
                std::vector<std::int32_t> out(count);
                dot_batch_scalar(b.ptrs.data(), b.w.data(), ncols, count, q, out.data());
                EXPECT_EQ(out, naive_dot(b, count, q)) << "q=" << q << " count=" << count;
            }
}

TEST(Kernels, ScalarAxpy) {
    std::vector<std::int32_t> y{1, 2, 3, 8}, x{8, 8, 0, 1};
    axpy_scalar(y.data(), x.data(), 2, y.size(), 9);
    EXPECT_EQ(y, (std::vector<std::int32_t>{8, 0, 3, 1}));
}

TEST(Kernels, Avx2MatchesScalar) {
#if defined(HECKELAB_HAVE_AVX2)
    if (!avx2_available()) GTEST_SKIP() << "CPU lacks AVX2";
    std::mt19937_64 rng(2);
    for (auto q : kModuli)
        for (auto count : kCounts)
            for (std::size_t ncols : {1u, 2u, 6u, 8u, 40u}) {
                const Batch b = random_batch(ncols, count, q, rng);
                std::vector<std::int32_t> s(count), v(count);
                dot_batch_scalar(b.ptrs.data(), b.w.data(), ncols, count, q, s.data());
                dot_batch_avx2(b.ptrs.data(), b.w.data(), ncols, count, q, v.data());
                ASSERT_EQ(s, v) << "q=" << q << " count=" << count << " ncols=" << ncols;

                std::vector<std::int32_t> y1 = b.cols[0], y2 = b.cols[0];
                const std::vector<std::int32_t>& x = b.cols[ncols - 1];
                axpy_scalar(y1.data(), x.data(), b.w[0], count, q);
                axpy_avx2(y2.data(), x.data(), b.w[0], count, q);
                ASSERT_EQ(y1, y2) << "axpy q=" << q << " count=" << count;
            }
#else
    GTEST_SKIP() << "built without the AVX2 kernels";
#endif
}

TEST(Kernels, DispatchReportsAnIsa) {
    const Isa isa = active_isa();
    EXPECT_TRUE(isa == Isa::Scalar || avx2_available());
    EXPECT_STRNE(isa_name(isa), "");
}
