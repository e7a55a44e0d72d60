#include "emk/metrics.hpp"

#include <cmath>
#include <limits>

#include "emk/errors.hpp"

namespace emk {

namespace {

constexpr double kDbFloor = -300.0;

// Hungarian method (shortest augmenting paths with potentials) minimizing
// total cost over bijections; 1-based internal indexing.
std::vector<Index> solve_assignment_min(const Matrix& cost) {
    const Index n = cost.rows();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<Index> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);

    for (Index i = 1; i <= n; ++i) {
        p[0] = i;
        Index j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const Index i0 = p[j0];
            Index j1 = 0;
            double delta = inf;
            for (Index j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const Index j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<Index> row_to_col(n);
    for (Index j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

std::vector<Index> solve_assignment_max(const Matrix& score) {
    if (score.rows() != score.cols() || score.rows() == 0)
        throw InvalidParameter("solve_assignment_max: need a nonempty square matrix");
    if (!score.allFinite())
        throw InvalidData("solve_assignment_max: non-finite scores");
    return solve_assignment_min(-score);
}

Matrix gain_matrix(const Matrix& W, const WhiteningTransform& whitening,
                   const Matrix& A) {
    return W * whitening.forward * A;
}

double isr_db(const Matrix& G) {
    const Index n = G.rows();
    if (G.cols() != n || n == 0)
        throw InvalidParameter("isr_db: gain matrix must be square");
    // Row-normalize before aligning so the assignment, and with it the whole
    // figure, is exactly invariant to per-row rescaling.
    Matrix scores = G.cwiseAbs();
    for (Index m = 0; m < n; ++m) {
        const double peak = scores.row(m).maxCoeff();
        if (peak == 0.0) throw DegenerateGain("isr_db: all-zero gain row");
        scores.row(m) /= peak;
    }
    const std::vector<Index> target = solve_assignment_max(scores);

    double total = 0.0;
    for (Index m = 0; m < n; ++m) {
        const double sig = G(m, target[m]) * G(m, target[m]);
        if (sig == 0.0)
            throw DegenerateGain("isr_db: assigned signal entry is zero");
        total += (G.row(m).squaredNorm() - sig) / sig;
    }
    const double linear = total / static_cast<double>(n);
    if (linear <= 0.0) return kDbFloor;
    return std::max(10.0 * std::log10(linear), kDbFloor);
}

Pairing pair_sources(const Matrix& S_true, const Matrix& Y) {
    const Index n = S_true.rows();
    const Index t = S_true.cols();
    if (Y.rows() != n || Y.cols() != t)
        throw InvalidParameter("pair_sources: shape mismatch");
    if (t < 2) throw TooFewSamples("pair_sources: need at least 2 samples");

    auto standardized = [](const Matrix& M) {
        Matrix out = M.colwise() - M.rowwise().mean();
        for (Index i = 0; i < out.rows(); ++i) {
            const double norm = out.row(i).norm();
            if (!(norm > 0.0))
                throw DegenerateSource("pair_sources: zero-variance row");
            out.row(i) /= norm;
        }
        return out;
    };
    const Matrix S = standardized(S_true);
    const Matrix E = standardized(Y);

    const Matrix corr = (E * S.transpose()).cwiseAbs().cwiseMin(1.0);
    Pairing pairing;
    pairing.permutation = solve_assignment_max(corr);
    pairing.correlations.resize(n);
    for (Index i = 0; i < n; ++i)
        pairing.correlations(i) = corr(i, pairing.permutation[i]);
    return pairing;
}

double amdahl_speedup(double f, double s) {
    if (!(f >= 0.0) || !(f <= 1.0))
        throw InvalidParameter("amdahl_speedup: f must lie in [0, 1]");
    if (!(s >= 1.0)) throw InvalidParameter("amdahl_speedup: s must be >= 1");
    return 1.0 / ((1.0 - f) + f / s);
}

}  // namespace emk
