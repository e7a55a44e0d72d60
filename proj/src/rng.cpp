#include "emk/rng.hpp"

#include <cmath>

#include "emk/errors.hpp"

namespace emk {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                          std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = base;
    splitmix64(s);
    s ^= static_cast<std::uint64_t>(stream);
    splitmix64(s);
    s ^= a;
    splitmix64(s);
    s ^= b;
    return splitmix64(s);
}

Rng::Rng(std::uint64_t seed) : gen_(seed) {}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform01() {
    // 53-bit mantissa draw on (0,1): offset by half an ulp so 0 is excluded.
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

int Rng::uniform_int(int lo, int hi) {
    // Rejection-free is unnecessary here; span is tiny and bias at 2^-64
    // scale is immaterial for data generation.
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
}

double Rng::normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw InvalidParameter("gamma shape must be positive and finite");
    if (shape < 1.0) {
        // Boost: G(a) = G(a+1) * U^(1/a).
        const double g = gamma(shape + 1.0);
        const double u = uniform01();
        return g * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze method.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace emk
