#include "cpr/tensor_cache.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace cpr {

namespace {

constexpr char kMagic[4] = {'C', 'P', 'R', 'T'};

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

} // namespace

std::string cache_key(const std::string& content) {
    // FNV-1a, 64 bit, plus the length to make accidental collisions rarer.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%016llx-%zx", static_cast<unsigned long long>(h), content.size());
    return buf;
}

std::optional<Matrix> cache_load(const std::string& dir, const std::string& key) {
    std::ifstream in(std::filesystem::path(dir) / (key + ".cprt"), std::ios::binary);
    if (!in) return std::nullopt;
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t rows = 0, cols = 0;
    if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) return std::nullopt;
    if (!get(in, version) || version != kTensorCacheVersion) return std::nullopt;
    if (!get(in, rows) || !get(in, cols)) return std::nullopt;
    if (rows > (1u << 20) || cols > (1u << 20)) return std::nullopt;
    Matrix m(rows, cols);
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = 0; j < cols; ++j) {
            std::uint32_t len = 0;
            if (!get(in, len) || len > (1u << 24)) return std::nullopt;
            std::string s(len, '\0');
            if (!in.read(s.data(), len)) return std::nullopt;
            Rational q;
            if (q.set_str(s, 16) != 0) return std::nullopt;
            q.canonicalize();
            m(i, j) = q;
        }
    return m;
}

void cache_store(const std::string& dir, const std::string& key, const Matrix& m) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto final_path = std::filesystem::path(dir) / (key + ".cprt");
    auto tmp_path = final_path;
    tmp_path += ".tmp";
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        if (!out) return;
        out.write(kMagic, 4);
        put<std::uint32_t>(out, kTensorCacheVersion);
        put<std::uint64_t>(out, m.rows());
        put<std::uint64_t>(out, m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                std::string s = m(i, j).get_str(16);
                put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
                out.write(s.data(), static_cast<std::streamsize>(s.size()));
            }
        if (!out) return;
    }
    std::filesystem::rename(tmp_path, final_path, ec);
}

} // namespace cpr
