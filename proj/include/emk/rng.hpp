#ifndef EMK_RNG_HPP
#define EMK_RNG_HPP

#include <cstdint>
#include <random>

namespace emk {

/// Stream tags for seed derivation. Every consumer of randomness derives its
/// own sub-seed from (user seed, tag, indices), so substreams never depend on
/// the order in which other components draw.
enum class Stream : std::uint64_t {
    SourceRow = 1,
    MixtureSpec = 2,
    Mixing = 3,
    IcaInit = 4,
    RowRecovery = 5,
    BenchRun = 6,
};

/// splitmix64 step; the de-facto standard 64-bit seed mixer.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent sub-seed from a base seed and up to three indices.
std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                          std::uint64_t a = 0, std::uint64_t b = 0);

/// Deterministic random stream with the handful of distributions the
/// generators need. Distribution algorithms are written out here rather than
/// taken from <random> so that a given seed produces the same values under
/// any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Uniform on (0, 1); never returns exactly 0 or 1.
    double uniform01();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double normal();

    /// Gamma(shape, scale 1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape);

    /// Raw 64-bit draw.
    std::uint64_t next_u64();

private:
    std::mt19937_64 gen_;
};

}  // namespace emk

#endif
