#pragma once
#include <cstdint>
#include <cmath>

namespace pnact {

// Counter-based generator in the splitmix64 family. Every (seed, stream...)
// chain yields an independent reproducible sequence, so replicates, days and
// sampling purposes each own a stream and results do not depend on thread
// scheduling. std:: distributions are implementation-defined across standard
// libraries, which would break byte-reproducibility, hence the hand-rolled
// uniform/gaussian below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    // Derive an independent sub-stream; chain freely: rng.stream(rep).stream(day).
    Rng stream(std::uint64_t idx) const {
        Rng r(*this);
        r.key_ = mix(key_ + 0x9e3779b97f4a7c15ull * (idx + 1));
        r.ctr_ = 0;
        r.have_spare_ = false;
        return r;
    }

    std::uint64_t next_u64() { return mix(key_ + 0xbf58476d1ce4e5b9ull * ++ctr_); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t lim = ~0ull - ~0ull % n;
        std::uint64_t x = next_u64();
        while (x >= lim) x = next_u64();
        return x % n;
    }

    // standard normal, Box-Muller (pairs cached)
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace pnact
