#ifndef EMK_MAXENT_HPP
#define EMK_MAXENT_HPP

#include <vector>

#include "emk/measuring.hpp"
#include "emk/types.hpp"

namespace emk {

/// Uniform grid with composite-trapezoid weights, used for every integral in
/// the density fit.
struct QuadratureGrid {
    Vector points;
    Vector weights;

    double lo() const { return points(0); }
    double hi() const { return points(points.size() - 1); }

    static QuadratureGrid over_range(double lo, double hi, int n_points = 2048);

    /// Grid spanning [min(sample) - 3*std, max(sample) + 3*std]. A degenerate
    /// (constant) sample gets a unit half-width span so downstream code sees a
    /// proper grid and fails in the solver instead of on a zero division.
    static QuadratureGrid from_sample(const Vector& sample, int n_points = 2048);
};

/// Converged maximum-entropy density p(x) = exp(-1 + sum_i lambda_i r_i(x)).
struct MaxEntModel {
    MeasuringSpec spec;
    Vector lambda;
    Vector alpha;
    QuadratureGrid grid;
};

struct NewtonOptions {
    double tol = 1e-7;          // max-abs moment residual at convergence
    int max_iters = 100;
    int max_halvings = 20;
    double max_condition = 1e12;
};

/// Newton iteration for the Lagrange multipliers: the residual is the moment
/// map rho_i(lambda) = integral r_i p - alpha_i, whose exact Jacobian is the
/// Gram matrix J_ij = integral r_i r_j p. The first component of rho drives
/// integral p -> alpha_1 = 1, so normalization is part of the same system.
/// Steps are halved (up to max_halvings) while the residual norm does not
/// decrease.
/// Throws SingularJacobian when cond(J) exceeds max_condition, NoConvergence
/// when the tolerance is not reached within max_iters.
Vector solve_lambda(const Vector& alpha, const MeasuringSpec& spec,
                    const QuadratureGrid& grid, const Vector& lambda0,
                    const NewtonOptions& opts = {});

/// Evaluates the model density at the given points.
Vector maxent_pdf(const Vector& points, const MaxEntModel& model);

/// Differential entropy of the model in nats: H = 1 - sum_i lambda_i alpha_i.
double entropy(const MaxEntModel& model);

/// Two-part description length: negative log-likelihood of the sample under
/// the model plus (kappa/2) ln T, with kappa = M + 2 * (number of local
/// kernels) counting the multipliers plus each kernel's mu and sigma.
double mdl_score(const Vector& sample, const MaxEntModel& model);

/// Multipliers of the Gaussian N(mean, var) on a spec's global slots; local
/// entries zero. The globals-only maxent solution for a mean/var-matched
/// sample starts here, and richer specs warm-start from the previous fit.
Vector gaussian_lambda(const MeasuringSpec& spec, double mean, double var);

/// Sample averages alpha_i = (1/T) sum_t r_i(y_t), with alpha_1 pinned to 1.
Vector sample_alpha(const Vector& sample, const MeasuringSpec& spec);

/// Fits a model with a fixed measuring spec: computes alpha from the sample
/// and solves for lambda, warm-starting from warm_lambda when given and from
/// the moment-matched Gaussian otherwise.
MaxEntModel fit_model(const Vector& sample, const MeasuringSpec& spec,
                      const QuadratureGrid& grid,
                      const Vector* warm_lambda = nullptr,
                      const NewtonOptions& opts = {});

struct KernelSelection {
    MeasuringSpec spec;
    MaxEntModel model;
    bool small_sample = false;       // T < 100: globals only, flagged
    std::vector<double> mdl_trace;   // MDL of each accepted spec, q = 0 first
};

/// Greedy EMK fit: start from the four globals, then add Gaussian kernels one
/// at a time at the grid point where the fitted density deviates most from a
/// 128-bin histogram of the sample, keeping an addition only while it lowers
/// the MDL score. Kernel width is the Silverman bandwidth
/// 1.06 * std * T^(-1/5); a kernel landing within 0.25 * sigma of an existing
/// one stops the search. A failed richer fit rolls back to the last converged
/// spec; errors propagate only if the globals-only fit itself fails.
KernelSelection select_kernels(const Vector& sample, int max_kernels = 5,
                               const NewtonOptions& opts = {});

}  // namespace emk

#endif
