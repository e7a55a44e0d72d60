#ifndef EMK_SOURCES_HPP
#define EMK_SOURCES_HPP

#include <cstdint>
#include <vector>

#include "emk/types.hpp"

namespace emk {

/// Randomized description of one benchmark source: a K-component mixture of
/// generalized Gaussian kernels.
struct GgdMixtureSpec {
    std::vector<double> weights;  // on the simplex, all positive
    std::vector<double> shapes;   // beta_i in (0.25, 4)
    std::vector<double> means;    // {-8,-4,4,8} for K=4, {-10,-5,0,5,10} for K=5
    std::vector<double> scales;   // sigma_i, default 1 pre-standardization

    int components() const { return static_cast<int>(weights.size()); }
};

/// i.i.d. draws from the generalized Gaussian density
/// p(x) = eta * exp(-|x - mu|^(2 beta) / (2 sigma^(2 beta))),
/// sampled exactly as X = mu + sigma * S * (2 G)^(1/(2 beta)) with S a random
/// sign and G ~ Gamma(1/(2 beta), 1).
/// Throws InvalidParameter for beta outside (0.25, 4) or sigma <= 0.
Vector sample_ggd(double beta, double mu, double sigma, Index t,
                  std::uint64_t seed);

struct GgdSourcesResult {
    Matrix S;  // N x T, each row standardized to zero mean, unit variance
    std::vector<GgdMixtureSpec> specs;
};

/// The GGD-mixture benchmark sources: each row gets its own randomized spec
/// (K in {4,5}, weights uniform on the simplex, shapes uniform in (0.25, 4),
/// the fixed mean sets, unit scales), then is standardized exactly.
GgdSourcesResult gen_ggd_mixture_sources(Index n, Index t, std::uint64_t seed);

/// Gamma benchmark sources: row n ~ Gamma(shape n+1), standardized.
/// Throws InvalidParameter for n > 8.
Matrix gen_gamma_sources(Index n, Index t, std::uint64_t seed);

/// Square mixing matrix with i.i.d. standard normal entries, redrawn (up to
/// 100 attempts) while its condition number exceeds 1e6.
/// Throws IllConditioned when no acceptable draw is found.
Matrix random_mixing(Index n, std::uint64_t seed, int* redraws = nullptr);

/// In-place exact standardization of each row to zero mean and unit unbiased
/// variance. Throws DegenerateSource on a zero-variance row.
void standardize_rows(Matrix& S);

}  // namespace emk

#endif
