#include "emk/sources.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "emk/errors.hpp"
#include "emk/rng.hpp"

namespace emk {

namespace {

double ggd_draw(Rng& rng, double beta, double mu, double sigma) {
    const double g = rng.gamma(1.0 / (2.0 * beta));
    const double mag = std::pow(2.0 * g, 1.0 / (2.0 * beta));
    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    return mu + sigma * sign * mag;
}

GgdMixtureSpec draw_mixture_spec(Rng& rng) {
    GgdMixtureSpec spec;
    const int k = rng.uniform01() < 0.5 ? 4 : 5;
    spec.means = (k == 4) ? std::vector<double>{-8.0, -4.0, 4.0, 8.0}
                          : std::vector<double>{-10.0, -5.0, 0.0, 5.0, 10.0};
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        spec.weights.push_back(rng.uniform01());
        total += spec.weights.back();
        spec.shapes.push_back(rng.uniform(0.25, 4.0));
        spec.scales.push_back(1.0);
    }
    for (auto& w : spec.weights) w /= total;
    return spec;
}

}  // namespace

Vector sample_ggd(double beta, double mu, double sigma, Index t,
                  std::uint64_t seed) {
    if (!(beta >= 0.25) || !(beta <= 4.0))
        throw InvalidParameter("sample_ggd: beta must lie in [0.25, 4]");
    if (!(sigma > 0.0))
        throw InvalidParameter("sample_ggd: sigma must be positive");
    Rng rng(seed);
    Vector x(t);
    for (Index i = 0; i < t; ++i) x(i) = ggd_draw(rng, beta, mu, sigma);
    return x;
}

void standardize_rows(Matrix& S) {
    const Index t = S.cols();
    for (Index i = 0; i < S.rows(); ++i) {
        const double mean = S.row(i).mean();
        S.row(i).array() -= mean;
        const double var = S.row(i).squaredNorm() / static_cast<double>(t - 1);
        if (!(var > 0.0))
            throw DegenerateSource("standardize_rows: zero-variance row");
        S.row(i) /= std::sqrt(var);
    }
}

GgdSourcesResult gen_ggd_mixture_sources(Index n, Index t, std::uint64_t seed) {
    if (n < 1 || t < 1)
        throw InvalidParameter("gen_ggd_mixture_sources: need n >= 1 and t >= 1");
    GgdSourcesResult out;
    out.S.resize(n, t);
    for (Index row = 0; row < n; ++row) {
        Rng rng(derive_seed(seed, Stream::SourceRow, static_cast<std::uint64_t>(row)));
        GgdMixtureSpec spec = draw_mixture_spec(rng);
        for (Index i = 0; i < t; ++i) {
            // Categorical component pick, then a draw from that kernel.
            double u = rng.uniform01();
            int c = 0;
            while (c + 1 < spec.components() && u >= spec.weights[c]) {
                u -= spec.weights[c];
                ++c;
            }
            out.S(row, i) =
                ggd_draw(rng, spec.shapes[c], spec.means[c], spec.scales[c]);
        }
        out.specs.push_back(std::move(spec));
    }
    if (t >= 2) standardize_rows(out.S);
    return out;
}

Matrix gen_gamma_sources(Index n, Index t, std::uint64_t seed) {
    if (n < 1 || n > 8)
        throw InvalidParameter("gen_gamma_sources: shapes are assigned 1..N with N <= 8");
    if (t < 1) throw InvalidParameter("gen_gamma_sources: need t >= 1");
    Matrix S(n, t);
    for (Index row = 0; row < n; ++row) {
        Rng rng(derive_seed(seed, Stream::SourceRow, static_cast<std::uint64_t>(row)));
        const double shape = static_cast<double>(row + 1);
        for (Index i = 0; i < t; ++i) S(row, i) = rng.gamma(shape);
    }
    if (t >= 2) standardize_rows(S);
    return S;
}

Matrix random_mixing(Index n, std::uint64_t seed, int* redraws) {
    if (n < 2) throw InvalidParameter("random_mixing: need n >= 2");
    Rng rng(derive_seed(seed, Stream::Mixing));
    if (redraws != nullptr) *redraws = 0;
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix A(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) A(i, j) = rng.normal();
        Eigen::JacobiSVD<Matrix> svd(A);
        const double smin = svd.singularValues()(n - 1);
        if (smin > 0.0 && svd.singularValues()(0) / smin <= 1e6) return A;
        if (redraws != nullptr) ++(*redraws);
    }
    throw IllConditioned("random_mixing: no acceptably conditioned draw in 100 attempts");
}

}  // namespace emk
