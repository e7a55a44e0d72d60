#include "emk/maxent.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include "emk/errors.hpp"

namespace emk {

namespace {

// Exponent clamp keeping exp() and the Gram products finite while a wild
// Newton trial step is being evaluated; rejected by the halving loop anyway.
constexpr double kMaxExponent = 300.0;

Vector pdf_on_points(const Matrix& R, const Vector& lambda) {
    return ((R.transpose() * lambda).array() - 1.0)
        .min(kMaxExponent)
        .exp()
        .matrix();
}

struct NewtonWork {
    Vector lambda;
    Vector pdf;  // on the grid, at the returned lambda
};

// A solution is only trustworthy while the grid resolves it: once a single
// trapezoid cell carries a sizable share of the total mass, the density has
// degenerated toward an atom (this happens on discrete-valued samples) and
// the quadrature moments certify nothing.
constexpr double kMaxCellMassFraction = 0.1;

bool grid_resolves(const Vector& pdf, const Vector& weights) {
    const Vector cell_mass = weights.cwiseProduct(pdf);
    const double total = cell_mass.sum();
    return total > 0.0 && cell_mass.maxCoeff() < kMaxCellMassFraction * total;
}

// Core Newton loop against a precomputed measuring matrix on the grid.
// All per-iteration work runs in buffers allocated once up front; row fits
// run concurrently in the optimizer, and repeated large temporaries would
// serialize the threads on the allocator.
NewtonWork solve_with_matrix(const Vector& alpha, const Matrix& R,
                             const Vector& weights, const Vector& lambda0,
                             const NewtonOptions& opts) {
    const Index m = R.rows();
    const Index g = R.cols();
    Vector lambda = lambda0;
    Vector pdf(g), wp(g), trial_pdf(g), trial_wp(g);
    Vector residual(m), trial_res(m), trial(m);
    Matrix scaled(m, g), J(m, m);

    auto eval_point = [&](const Vector& l, Vector& pdf_out, Vector& wp_out,
                          Vector& res_out) {
        pdf_out.noalias() = R.transpose() * l;
        pdf_out = (pdf_out.array() - 1.0).min(kMaxExponent).exp();
        wp_out = weights.cwiseProduct(pdf_out);
        res_out.noalias() = R * wp_out;
        res_out -= alpha;
    };
    eval_point(lambda, pdf, wp, residual);

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (residual.cwiseAbs().maxCoeff() < opts.tol) {
            if (!grid_resolves(pdf, weights))
                throw NoConvergence(
                    "solve_lambda: density concentrates beyond the grid resolution");
            return {lambda, pdf};
        }

        scaled.noalias() = R * wp.asDiagonal();
        J.noalias() = scaled * R.transpose();
        Eigen::JacobiSVD<Matrix> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(m - 1);
        if (!std::isfinite(smax) || smin <= 0.0 || smax / smin > opts.max_condition)
            throw SingularJacobian("solve_lambda: Jacobian condition number above threshold");

        const Vector delta = svd.solve(residual);
        const double res_norm = residual.norm();
        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            trial = lambda - step * delta;
            eval_point(trial, trial_pdf, trial_wp, trial_res);
            if (trial_res.allFinite() && trial_res.norm() < res_norm) {
                lambda.swap(trial);
                pdf.swap(trial_pdf);
                wp.swap(trial_wp);
                residual.swap(trial_res);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stagnated; final tolerance check below
    }

    if (residual.cwiseAbs().maxCoeff() < opts.tol) {
        if (!grid_resolves(pdf, weights))
            throw NoConvergence(
                "solve_lambda: density concentrates beyond the grid resolution");
        return {lambda, pdf};
    }
    throw NoConvergence("solve_lambda: residual " +
                        std::to_string(residual.cwiseAbs().maxCoeff()) +
                        " above tolerance after Newton iterations");
}

double sample_std(const Vector& sample) {
    const double mean = sample.mean();
    const Index t = sample.size();
    if (t < 2) return 0.0;
    const double ss = (sample.array() - mean).square().sum();
    return std::sqrt(ss / static_cast<double>(t - 1));
}

// Piecewise-constant histogram density over [lo, hi], unit area.
Vector histogram_density_at(const Vector& sample, double lo, double hi,
                            int bins, const Vector& query) {
    Vector counts = Vector::Zero(bins);
    const double width = (hi - lo) / bins;
    for (Index t = 0; t < sample.size(); ++t) {
        int b = static_cast<int>((sample(t) - lo) / width);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        counts(b) += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(sample.size()) * width);
    Vector out(query.size());
    for (Index i = 0; i < query.size(); ++i) {
        int b = static_cast<int>((query(i) - lo) / width);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        out(i) = counts(b) * norm;
    }
    return out;
}

}  // namespace

QuadratureGrid QuadratureGrid::over_range(double lo, double hi, int n_points) {
    if (!(hi > lo) || n_points < 2)
        throw InvalidParameter("QuadratureGrid: need hi > lo and at least 2 points");
    QuadratureGrid g;
    g.points = Vector::LinSpaced(n_points, lo, hi);
    const double h = (hi - lo) / (n_points - 1);
    g.weights = Vector::Constant(n_points, h);
    g.weights(0) = 0.5 * h;
    g.weights(n_points - 1) = 0.5 * h;
    return g;
}

QuadratureGrid QuadratureGrid::from_sample(const Vector& sample, int n_points) {
    if (sample.size() < 2)
        throw TooFewSamples("QuadratureGrid: need at least 2 samples");
    if (!sample.allFinite())
        throw InvalidData("QuadratureGrid: sample has non-finite entries");
    const double sd = sample_std(sample);
    const double margin = sd > 0.0 ? 3.0 * sd : 1.0;
    return over_range(sample.minCoeff() - margin, sample.maxCoeff() + margin,
                      n_points);
}

Vector solve_lambda(const Vector& alpha, const MeasuringSpec& spec,
                    const QuadratureGrid& grid, const Vector& lambda0,
                    const NewtonOptions& opts) {
    spec.validate();
    if (alpha.size() != spec.size() || lambda0.size() != spec.size())
        throw InvalidParameter("solve_lambda: alpha/lambda0 length must match spec");
    const Matrix R = eval_measuring_matrix(grid.points, spec);
    return solve_with_matrix(alpha, R, grid.weights, lambda0, opts).lambda;
}

Vector maxent_pdf(const Vector& points, const MaxEntModel& model) {
    const Matrix R = eval_measuring_matrix(points, model.spec);
    return pdf_on_points(R, model.lambda);
}

double entropy(const MaxEntModel& model) {
    return 1.0 - model.lambda.dot(model.alpha);
}

double mdl_score(const Vector& sample, const MaxEntModel& model) {
    const Index t = sample.size();
    const Matrix R = eval_measuring_matrix(sample, model.spec);
    // ln p(y_t) = -1 + lambda . r(y_t)
    const double nll =
        static_cast<double>(t) - (R.transpose() * model.lambda).sum();
    const int kappa =
        model.spec.size() + 2 * static_cast<int>(model.spec.locals.size());
    return nll + 0.5 * kappa * std::log(static_cast<double>(t));
}

Vector gaussian_lambda(const MeasuringSpec& spec, double mean, double var) {
    if (!(var > 0.0))
        throw InvalidParameter("gaussian_lambda: variance must be positive");
    Vector lambda = Vector::Zero(spec.size());
    lambda(0) = 1.0 - 0.5 * std::log(2.0 * M_PI * var) - mean * mean / (2.0 * var);
    lambda(1) = mean / var;
    lambda(2) = -0.5 / var;
    return lambda;
}

Vector sample_alpha(const Vector& sample, const MeasuringSpec& spec) {
    Vector alpha = eval_measuring_matrix(sample, spec).rowwise().mean();
    alpha(0) = 1.0;
    return alpha;
}

MaxEntModel fit_model(const Vector& sample, const MeasuringSpec& spec,
                      const QuadratureGrid& grid, const Vector* warm_lambda,
                      const NewtonOptions& opts) {
    const Vector alpha = sample_alpha(sample, spec);
    Vector lambda0;
    if (warm_lambda != nullptr) {
        lambda0 = *warm_lambda;
    } else {
        const double mean = sample.mean();
        const double sd = sample_std(sample);
        lambda0 = gaussian_lambda(spec, mean, sd > 0.0 ? sd * sd : 1.0);
    }
    MaxEntModel model{spec, solve_lambda(alpha, spec, grid, lambda0, opts),
                      alpha, grid};
    return model;
}

namespace {

Vector kernel_row(const Vector& points, const LocalKernel& k) {
    return (-0.5 * ((points.array() - k.mu) / k.sigma).square()).exp().matrix();
}

}  // namespace

KernelSelection select_kernels(const Vector& sample, int max_kernels,
                               const NewtonOptions& opts) {
    if (max_kernels < 0 || max_kernels > MeasuringSpec::kMaxLocals)
        throw InvalidParameter("select_kernels: max_kernels must be in [0, 5]");
    const Index t = sample.size();
    const QuadratureGrid grid = QuadratureGrid::from_sample(sample);
    const double log_t = std::log(static_cast<double>(t));

    // Measuring matrices grow one kernel row at a time; everything downstream
    // (alpha, Newton, likelihood) reads these instead of re-evaluating.
    MeasuringSpec spec;
    Matrix r_sample = eval_measuring_matrix(sample, spec);
    Matrix r_grid = eval_measuring_matrix(grid.points, spec);

    auto fit_current = [&](const Vector& lambda0) {
        Vector alpha = r_sample.rowwise().mean();
        alpha(0) = 1.0;
        NewtonWork work =
            solve_with_matrix(alpha, r_grid, grid.weights, lambda0, opts);
        return std::pair<MaxEntModel, Vector>(
            MaxEntModel{spec, std::move(work.lambda), std::move(alpha), grid},
            std::move(work.pdf));
    };
    auto mdl_of = [&](const MaxEntModel& model) {
        // sum_t ln p(y_t) = sum_t (lambda . r(y_t) - 1) = lambda . row_sums - T
        const double nll =
            static_cast<double>(t) - model.lambda.dot(r_sample.rowwise().sum());
        const int kappa =
            model.spec.size() + 2 * static_cast<int>(model.spec.locals.size());
        return nll + 0.5 * kappa * log_t;
    };

    const double mean = sample.mean();
    const double sd = sample_std(sample);
    KernelSelection sel;
    Vector p_fit;
    std::tie(sel.model, p_fit) =
        fit_current(gaussian_lambda(spec, mean, sd > 0.0 ? sd * sd : 1.0));
    sel.spec = spec;
    sel.mdl_trace.push_back(mdl_of(sel.model));
    if (t < 100) {
        sel.small_sample = true;
        return sel;
    }
    if (!(sd > 0.0)) return sel;

    const double sigma =
        1.06 * sd * std::pow(static_cast<double>(t), -0.2);  // Silverman
    const Vector p_emp =
        histogram_density_at(sample, grid.lo(), grid.hi(), 128, grid.points);

    for (int q = 1; q <= max_kernels; ++q) {
        Index at;
        (p_fit - p_emp).cwiseAbs().maxCoeff(&at);
        const double mu = grid.points(at);

        bool duplicate = false;
        for (const auto& k : spec.locals)
            if (std::abs(mu - k.mu) < 0.25 * sigma) duplicate = true;
        if (duplicate) break;

        const LocalKernel added{mu, sigma};
        spec.locals.push_back(added);
        r_sample.conservativeResize(spec.size(), Eigen::NoChange);
        r_sample.row(spec.size() - 1) = kernel_row(sample, added).transpose();
        r_grid.conservativeResize(spec.size(), Eigen::NoChange);
        r_grid.row(spec.size() - 1) = kernel_row(grid.points, added).transpose();

        Vector warm = Vector::Zero(spec.size());
        warm.head(sel.model.lambda.size()) = sel.model.lambda;
        MaxEntModel candidate;
        Vector candidate_pdf;
        double mdl = 0.0;
        bool converged = true;
        try {
            std::tie(candidate, candidate_pdf) = fit_current(warm);
            mdl = mdl_of(candidate);
        } catch (const Error&) {
            converged = false;
        }
        if (!converged || mdl >= sel.mdl_trace.back()) {
            spec.locals.pop_back();
            r_sample.conservativeResize(spec.size(), Eigen::NoChange);
            r_grid.conservativeResize(spec.size(), Eigen::NoChange);
            break;
        }
        sel.spec = spec;
        sel.model = std::move(candidate);
        sel.mdl_trace.push_back(mdl);
        p_fit = std::move(candidate_pdf);
    }
    return sel;
}

}  // namespace emk
