#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace scimetrics {

/// 64-bit FNV-1a. Stable across platforms; used for token hashing.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0) noexcept;

/// SplitMix64 step; a portable source of seeded bits.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Portable seeded generator (std::mt19937_64 is bit-exact by the standard,
/// the std distributions are not, so uniform/normal draws are done here).
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}
    std::uint64_t next() noexcept { return splitmix64(state_); }
    double uniform() noexcept;                  // [0, 1)
    double normal() noexcept;                   // standard normal, Box-Muller
    std::size_t below(std::size_t n) noexcept;  // [0, n)
    template <class T>
    void shuffle(std::vector<T>& v) noexcept {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal that round-trips a double.
std::string format_double(double v);

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Runs body(i) for i in [0, n) on up to `threads` workers. body must only
/// write state owned by index i.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Process-wide worker cap used by parallel sections (1 = serial).
unsigned worker_threads() noexcept;
void set_worker_threads(unsigned n) noexcept;

void log_warning(std::string_view message);
void log_info(std::string_view message);

}  // namespace scimetrics
