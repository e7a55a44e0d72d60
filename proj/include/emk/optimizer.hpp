#ifndef EMK_OPTIMIZER_HPP
#define EMK_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "emk/maxent.hpp"
#include "emk/preprocess.hpp"
#include "emk/types.hpp"

namespace emk {

enum class InitStrategy {
    RandomOrthogonal,    // Haar-random orthogonal matrix from the seed
    FixedNonlinearity,   // symmetric tanh fixed-point warm start
    Identity,            // W0 = I, for already-separated smoke runs
};

struct IcaConfig {
    double gamma = 0.01;        // gradient step size
    int lag_k = 8;              // termination lag on the cost
    double delta = 1e-6;        // termination tolerance
    int max_iters = 200;
    int max_local_kernels = 5;  // M = 4 + this
    int refit_period = 1;       // full kernel reselection every this many iterations
    int workers = 0;            // 0 = sequential in-place sweep; >= 1 snapshot sweep
    std::uint64_t seed = 0;
    InitStrategy init = InitStrategy::FixedNonlinearity;
    bool force_jacobi = false;      // snapshot sweep even with workers == 0
    bool fixed_iterations = false;  // benchmarking: always run max_iters sweeps

    void validate() const;
};

struct DemixingState {
    Matrix W;                        // rows unit-norm
    std::vector<MaxEntModel> models; // latest per-row density fits
    std::vector<double> cost_trace;  // one J value per iteration
    int iterations_run = 0;
    bool converged = false;
    bool small_sample = false;       // T <= 10 N: results likely noisy
};

/// Initial demixing matrix with orthonormal rows. FixedNonlinearity runs up
/// to 50 symmetric tanh fixed-point sweeps on top of a seeded Haar-random
/// start, standing in for a warm start from a cheap fixed-model ICA.
Matrix init_demixing(const Matrix& Z, InitStrategy strategy, std::uint64_t seed);

/// Decoupled cost gradient for row m:
///   -sum_i lambda_i (1/T) sum_t r_i'(y_m(t)) z(t)  -  h_m / (h_m^T w_m),
/// with y_m = w_m^T Z and the multipliers frozen at the model's fit.
/// Throws DegenerateDemixing when h_m^T w_m is numerically zero (the pole of
/// the second term) or propagated from the perpendicular-vector computation.
Vector decoupled_gradient(const Matrix& W, const Matrix& Z, Index m,
                          const MaxEntModel& model);

/// Projection onto the tangent hyperplane of the unit sphere at w:
/// u = g - (w . g) w.
Vector project_to_tangent(const Vector& w, const Vector& g);

/// One retracted gradient step: (w - gamma u) / ||w - gamma u||.
/// Throws StepCollapse when the unnormalized step is shorter than 1e-14.
Vector update_row(const Vector& w, const Vector& u, double gamma);

/// Cost J(W) = sum_n H(y_n) - ln|det W|, the decoupled objective up to its
/// additive constant. Throws DegenerateDemixing when |det W| underflows.
double cost(const Matrix& W, const std::vector<MaxEntModel>& models);

struct IcaResult {
    DemixingState state;
    WhiteningTransform whitening;
};

/// Per-iteration observer: iteration index, demixing matrix after the sweep,
/// and the recorded cost. Used for instrumentation and invariant checks.
using IterObserver = std::function<void(int, const Matrix&, double)>;

/// Full pipeline: center, whiten, initialize, then per-row sweeps of density
/// fit -> decoupled gradient -> tangent projection -> retracted step, until
/// |J(iter) - J(iter - lag_k)| < delta or max_iters.
///
/// With workers == 0 rows update in place, each seeing the rows already
/// updated this sweep. With workers >= 1 (or force_jacobi) every row of one
/// iteration reads the same snapshot of W and the new rows are joined before
/// the cost and termination check, so the result is bitwise independent of
/// the worker count.
IcaResult run_ica(const Matrix& X, const IcaConfig& config,
                  const IterObserver& observer = {});

}  // namespace emk

#endif
