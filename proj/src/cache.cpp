#include "heckelab/cache.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace heckelab {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'H', 'K', 'L', 'C'};
constexpr const char* kSuffix = ".hkc";

void put_u32(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(char((v >> (8 * k)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(char((v >> (8 * k)) & 0xff));
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    bool take(std::size_t n) const { return pos + n <= buf.size(); }
    bool u32(std::uint32_t& v) {
        if (!take(4)) return false;
        v = 0;
        for (int k = 0; k < 4; ++k) v |= std::uint32_t(static_cast<unsigned char>(buf[pos + k])) << (8 * k);
        pos += 4;
        return true;
    }
    bool u64(std::uint64_t& v) {
        if (!take(8)) return false;
        v = 0;
        for (int k = 0; k < 8; ++k) v |= std::uint64_t(static_cast<unsigned char>(buf[pos + k])) << (8 * k);
        pos += 8;
        return true;
    }
    bool bytes(std::size_t n, std::string& out) {
        if (!take(n)) return false;
        out.assign(buf, pos, n);
        pos += n;
        return true;
    }
};

struct Parsed {
    std::string key;
    std::uint32_t p = 0, e = 0, n = 0;
    std::vector<std::string> records;
};

// Full structural validation; nullopt on any defect.
std::optional<Parsed> parse(const std::string& buf) {
    if (buf.size() < 4 + 8 || buf.compare(0, 4, kMagic, 4) != 0) return std::nullopt;
    const std::size_t body = buf.size() - 8;
    Reader tail{buf, body};
    std::uint64_t sum = 0;
    if (!tail.u64(sum) || sum != fnv1a64(buf.data(), body)) return std::nullopt;
    Reader r{buf, 4};
    std::uint32_t version = 0, keylen = 0;
    if (!r.u32(version) || version != kCacheFormatVersion) return std::nullopt;
    Parsed out;
    if (!r.u32(keylen) || !r.bytes(keylen, out.key)) return std::nullopt;
    if (!r.u32(out.p) || !r.u32(out.e) || !r.u32(out.n)) return std::nullopt;
    std::uint64_t count = 0;
    if (!r.u64(count)) return std::nullopt;
    for (std::uint64_t k = 0; k < count; ++k) {
        std::uint32_t len = 0;
        std::string rec;
        if (!r.u32(len) || !r.bytes(len, rec)) return std::nullopt;
        out.records.push_back(std::move(rec));
    }
    if (r.pos != body) return std::nullopt;
    return out;
}

std::optional<std::string> slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed) {
    auto* b = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t k = 0; k < n; ++k) {
        h ^= b[k];
        h *= 1099511628211ull;
    }
    return h;
}

std::string CacheKey::str() const {
    std::ostringstream s;
    s << "g=" << g << ";p=" << p << ";type=" << type.name() << ";model=" << model_version;
    return s.str();
}

EnumerationCache::EnumerationCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path EnumerationCache::path_for(const CacheKey& key) const {
    const std::string k = key.str();
    char name[32];
    std::snprintf(name, sizeof name, "%016llx", static_cast<unsigned long long>(fnv1a64(k.data(), k.size())));
    return dir_ / (std::string(name) + kSuffix);
}

std::optional<std::vector<Submodule>> EnumerationCache::load(const CacheKey& key) const {
    auto buf = slurp(path_for(key));
    std::optional<Parsed> parsed;
    if (buf) parsed = parse(*buf);
    if (!parsed || parsed->key != key.str() || int(parsed->p) != key.p ||
        int(parsed->e) != key.type.exponent() || int(parsed->n) != 2 * key.g) {
        ++misses_;
        return std::nullopt;
    }
    const RingCtx ctx = RingCtx::make(key.p, key.type.exponent());
    std::vector<Submodule> out;
    out.reserve(parsed->records.size());
    try {
        for (const auto& rec : parsed->records) out.push_back(Submodule::from_bytes(ctx, parsed->n, rec));
    } catch (const DomainError&) {
        ++misses_;
        return std::nullopt;
    }
    if (!std::is_sorted(out.begin(), out.end())) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return out;
}

void EnumerationCache::store(const CacheKey& key, const std::vector<Submodule>& list) const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create cache directory " + dir_.string() + ": " + ec.message());
    std::string buf(kMagic, 4);
    put_u32(buf, kCacheFormatVersion);
    const std::string k = key.str();
    put_u32(buf, std::uint32_t(k.size()));
    buf += k;
    put_u32(buf, std::uint32_t(key.p));
    put_u32(buf, std::uint32_t(key.type.exponent()));
    put_u32(buf, std::uint32_t(2 * key.g));
    put_u64(buf, list.size());
    for (const auto& w : list) {
        const std::string rec = w.bytes();
        put_u32(buf, std::uint32_t(rec.size()));
        buf += rec;
    }
    put_u64(buf, fnv1a64(buf.data(), buf.size()));
    const fs::path target = path_for(key);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        out.write(buf.data(), std::streamsize(buf.size()));
        if (!out) throw std::runtime_error("short write on cache file " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) throw std::runtime_error("cannot move cache file into place " + target.string() + ": " + ec.message());
}

std::vector<EnumerationCache::Entry> EnumerationCache::status() const {
    std::vector<Entry> out;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) return out;
    for (const auto& de : fs::directory_iterator(dir_, ec)) {
        if (de.path().extension() != kSuffix) continue;
        Entry e;
        e.file = de.path();
        if (auto buf = slurp(de.path()))
            if (auto parsed = parse(*buf)) {
                e.key = parsed->key;
                e.records = parsed->records.size();
                e.valid = true;
            }
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.file < b.file; });
    return out;
}

std::size_t EnumerationCache::purge() const {
    std::size_t removed = 0;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) return 0;
    std::vector<fs::path> victims;
    for (const auto& de : fs::directory_iterator(dir_, ec)) {
        const auto ext = de.path().extension();
        if (ext == kSuffix || ext == ".tmp") victims.push_back(de.path());
    }
    for (const auto& v : victims) {
        if (!fs::remove(v, ec) || ec)
            throw std::runtime_error("cannot remove cache file " + v.string() + ": " + ec.message());
        ++removed;
    }
    return removed;
}

std::vector<Submodule> enumerate_cached(int g, int p, HeckeType t, const EnumOptions& opt,
                                        const EnumerationCache* cache) {
    if (cache == nullptr) return enumerate(g, p, t, opt);
    const std::uint64_t predicted = predicted_count(g, p, t);
    if (predicted > opt.budget) throw BudgetExceeded("cached enumeration", predicted, opt.budget);
    const CacheKey key{g, p, t};
    if (auto hit = cache->load(key)) return std::move(*hit);
    auto list = enumerate(g, p, t, opt);
    cache->store(key, list);
    return list;
}

}  // namespace heckelab
