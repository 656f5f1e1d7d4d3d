#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "heckelab/cache.hpp"

using namespace heckelab;
namespace fs = std::filesystem;

namespace {

class CacheTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("heckelab_cache_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    static std::string read(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), {}};
    }
    static void write(const fs::path& p, const std::string& s) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out << s;
    }

    fs::path dir_;
};

const CacheKey kTp1{3, 2, HeckeType::tpi(1)};

}  // namespace

TEST_F(CacheTest, RoundTripIsByteIdentical) {
    EnumerationCache cache(dir_);
    EXPECT_FALSE(cache.load(kTp1).has_value());
    EXPECT_EQ(cache.misses(), 1u);
    const auto fresh = enumerate_cached(3, 2, HeckeType::tpi(1), {}, &cache);
    EXPECT_EQ(fresh.size(), 2520u);
    const auto again = enumerate_cached(3, 2, HeckeType::tpi(1), {}, &cache);
    EXPECT_EQ(cache.hits(), 1u);
    ASSERT_EQ(again.size(), fresh.size());
    for (std::size_t k = 0; k < fresh.size(); ++k) ASSERT_EQ(again[k].bytes(), fresh[k].bytes());
    const auto st = cache.status();
    ASSERT_EQ(st.size(), 1u);
    EXPECT_TRUE(st[0].valid);
    EXPECT_EQ(st[0].records, 2520u);
    EXPECT_EQ(st[0].key, kTp1.str());
}

TEST_F(CacheTest, KeysAreContentAddressed) {
    EnumerationCache cache(dir_);
    EXPECT_NE(cache.path_for(kTp1), cache.path_for(CacheKey{3, 3, HeckeType::tpi(1)}));
    EXPECT_NE(cache.path_for(kTp1), cache.path_for(CacheKey{3, 2, HeckeType::tp()}));
    CacheKey other_model = kTp1;
    other_model.model_version = kModelVersion + 1;
    EXPECT_NE(cache.path_for(kTp1), cache.path_for(other_model));
}

TEST_F(CacheTest, CorruptFilesAreIgnoredAndRegenerated) {
    EnumerationCache cache(dir_);
    const auto list = enumerate_cached(3, 2, HeckeType::tp(), {}, &cache);
    const fs::path file = cache.path_for(CacheKey{3, 2, HeckeType::tp()});
    const std::string good = read(file);

    std::string flipped = good;
    flipped[flipped.size() / 2] ^= 0x5a;
    write(file, flipped);
    EXPECT_FALSE(cache.load(CacheKey{3, 2, HeckeType::tp()}).has_value());
    ASSERT_EQ(cache.status().size(), 1u);
    EXPECT_FALSE(cache.status()[0].valid);

    write(file, good.substr(0, good.size() - 3));
    EXPECT_FALSE(cache.load(CacheKey{3, 2, HeckeType::tp()}).has_value());

    write(file, "");
    const auto regen = enumerate_cached(3, 2, HeckeType::tp(), {}, &cache);
    EXPECT_EQ(regen, list);
    EXPECT_EQ(read(file), good);
}

TEST_F(CacheTest, VersionMismatchIsAMiss) {
    EnumerationCache cache(dir_);
    enumerate_cached(2, 3, HeckeType::tp(), {}, &cache);
    const CacheKey key{2, 3, HeckeType::tp()};
    std::string buf = read(cache.path_for(key));
    buf[4] = char(kCacheFormatVersion + 1);
    // keep the checksum valid so only the version differs
    const std::uint64_t sum = fnv1a64(buf.data(), buf.size() - 8);
    for (int k = 0; k < 8; ++k) buf[buf.size() - 8 + std::size_t(k)] = char((sum >> (8 * k)) & 0xff);
    write(cache.path_for(key), buf);
    EXPECT_FALSE(cache.load(key).has_value());
}

TEST_F(CacheTest, WrongKeyInFileIsAMiss) {
    EnumerationCache cache(dir_);
    enumerate_cached(2, 3, HeckeType::tp(), {}, &cache);
    const CacheKey a{2, 3, HeckeType::tp()}, b{2, 2, HeckeType::tp()};
    fs::copy_file(cache.path_for(a), cache.path_for(b));
    EXPECT_FALSE(cache.load(b).has_value());
}

TEST_F(CacheTest, PurgeRemovesOnlyCacheFiles) {
    EnumerationCache cache(dir_);
    EXPECT_EQ(cache.purge(), 0u);  // missing directory
    enumerate_cached(2, 2, HeckeType::tp(), {}, &cache);
    enumerate_cached(2, 3, HeckeType::tp(), {}, &cache);
    write(dir_ / "notes.txt", "keep");
    EXPECT_EQ(cache.purge(), 2u);
    EXPECT_TRUE(fs::exists(dir_ / "notes.txt"));
    EXPECT_TRUE(cache.status().empty());
}
