#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace ccosim {

/// 64-bit FNV-1a hash of a stream name.
constexpr uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic named random stream. All randomness in the project flows from
/// one root seed through named sub-streams ("module.purpose"), so adding draws
/// in one module never perturbs another module's sequence. Gaussian draws are
/// generated with the Marsaglia polar method rather than
/// std::normal_distribution, whose output differs between standard libraries.
class RngStream {
public:
    RngStream(uint64_t root_seed, std::string_view name)
        : seed_(splitmix64(root_seed ^ fnv1a(name))), engine_(seed_) {}

    /// Derive an independent child stream. Forking does not consume state from
    /// this stream; the child depends only on (this stream's seed, name).
    RngStream fork(std::string_view name) const { return RngStream(seed_, name); }
    RngStream fork(std::string_view name, uint64_t index) const {
        return RngStream(splitmix64(seed_ ^ fnv1a(name)), index ^ 0x5bf03635u);
    }

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal draw (Marsaglia polar, second value of the pair discarded).
    double normal() {
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return u * std::sqrt(-2.0 * std::log(s) / s);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::mt19937_64& engine() { return engine_; }
    uint64_t seed() const { return seed_; }

private:
    RngStream(uint64_t mixed_seed, uint64_t index)
        : seed_(splitmix64(mixed_seed + 0x9e3779b97f4a7c15ull * (index + 1))), engine_(seed_) {}

    uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace ccosim
