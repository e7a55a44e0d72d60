#include "emk/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "emk/decoupler.hpp"
#include "emk/errors.hpp"
#include "emk/rng.hpp"

namespace emk {

namespace {

// Fork/join pool for the per-row work of one iteration. Rows are claimed
// through an atomic counter; each row's result depends only on the shared
// snapshot, so the claim order cannot change the output.
class RowPool {
public:
    explicit RowPool(int workers) {
        for (int i = 0; i < workers; ++i)
            threads_.emplace_back([this] { worker_loop(); });
    }

    ~RowPool() {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
        }
        start_cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void run(Index n_rows, const std::function<void(Index)>& fn) {
        {
            std::lock_guard lock(mutex_);
            fn_ = &fn;
            next_row_.store(0, std::memory_order_relaxed);
            rows_total_ = n_rows;
            rows_done_ = 0;
            ++generation_;
        }
        start_cv_.notify_all();
        std::unique_lock lock(mutex_);
        done_cv_.wait(lock, [this] { return rows_done_ == rows_total_; });
        fn_ = nullptr;
    }

private:
    void worker_loop() {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(Index)>* fn = nullptr;
            {
                std::unique_lock lock(mutex_);
                start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
                if (stopping_) return;
                seen = generation_;
                fn = fn_;
            }
            Index done = 0;
            for (;;) {
                const Index row = next_row_.fetch_add(1, std::memory_order_relaxed);
                if (row >= rows_total_) break;
                (*fn)(row);
                ++done;
            }
            {
                std::lock_guard lock(mutex_);
                rows_done_ += done;
                if (rows_done_ == rows_total_) done_cv_.notify_all();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(Index)>* fn_ = nullptr;
    std::atomic<Index> next_row_{0};
    Index rows_total_ = 0;
    Index rows_done_ = 0;
    std::uint64_t generation_ = 0;
    bool stopping_ = false;
};

Matrix haar_orthogonal(Index n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix A(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) A(i, j) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q.transpose();
}

Matrix symmetric_decorrelate(const Matrix& W) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(W * W.transpose());
    const Vector& evals = eig.eigenvalues();
    if (!(evals(0) > 1e-12 * evals(evals.size() - 1)))
        throw DegenerateDemixing("symmetric decorrelation: W W^T nearly singular");
    const Matrix& E = eig.eigenvectors();
    return E * evals.cwiseSqrt().cwiseInverse().asDiagonal() * E.transpose() * W;
}

Matrix tanh_fixed_point_init(const Matrix& Z, std::uint64_t seed) {
    const Index n = Z.rows();
    const Index t = Z.cols();
    Matrix W = haar_orthogonal(n, seed);
    for (int it = 0; it < 50; ++it) {
        const Matrix Y = W * Z;
        const Matrix G = Y.array().tanh().matrix();
        const Vector gprime_mean =
            (1.0 - G.array().square()).rowwise().mean().matrix();
        Matrix W_plus =
            (G * Z.transpose()) / static_cast<double>(t) - gprime_mean.asDiagonal() * W;
        Matrix W_new;
        try {
            W_new = symmetric_decorrelate(W_plus);
        } catch (const DegenerateDemixing&) {
            W = haar_orthogonal(n, derive_seed(seed, Stream::IcaInit,
                                               static_cast<std::uint64_t>(it) + 1));
            continue;
        }
        const double agreement =
            (W_new * W.transpose()).diagonal().cwiseAbs().minCoeff();
        W = W_new;
        if (agreement > 1.0 - 1e-9) break;
    }
    return W;
}

}  // namespace

void IcaConfig::validate() const {
    if (!(gamma > 0.0)) throw InvalidParameter("IcaConfig: gamma must be positive");
    if (lag_k < 1) throw InvalidParameter("IcaConfig: lag_k must be >= 1");
    if (!(delta > 0.0)) throw InvalidParameter("IcaConfig: delta must be positive");
    if (max_iters < lag_k)
        throw InvalidParameter("IcaConfig: max_iters must be >= lag_k");
    if (max_local_kernels < 0 || max_local_kernels > MeasuringSpec::kMaxLocals)
        throw InvalidParameter("IcaConfig: max_local_kernels must be in [0, 5]");
    if (refit_period < 1)
        throw InvalidParameter("IcaConfig: refit_period must be >= 1");
    if (workers < 0) throw InvalidParameter("IcaConfig: workers must be >= 0");
}

Matrix init_demixing(const Matrix& Z, InitStrategy strategy, std::uint64_t seed) {
    switch (strategy) {
        case InitStrategy::RandomOrthogonal:
            return haar_orthogonal(Z.rows(), seed);
        case InitStrategy::FixedNonlinearity:
            return tanh_fixed_point_init(Z, seed);
        case InitStrategy::Identity:
            return Matrix::Identity(Z.rows(), Z.rows());
    }
    throw InvalidParameter("init_demixing: unknown strategy");
}

Vector decoupled_gradient(const Matrix& W, const Matrix& Z, Index m,
                          const MaxEntModel& model) {
    const Index t = Z.cols();
    const Vector y = (W.row(m) * Z).transpose();
    // score(t) = sum_i lambda_i r_i'(y_t), accumulated term by term so no
    // M x T intermediate is ever materialized.
    const Vector& lambda = model.lambda;
    Vector score = Vector::Constant(t, lambda(1));
    score.array() += (2.0 * lambda(2)) * y.array();
    const auto y2 = y.array().square();
    score.array() += lambda(3) * (1.0 - y2) / (1.0 + y2).square();
    for (std::size_t j = 0; j < model.spec.locals.size(); ++j) {
        const auto& k = model.spec.locals[j];
        const double inv_s2 = 1.0 / (k.sigma * k.sigma);
        const auto u = y.array() - k.mu;
        score.array() -=
            (lambda(4 + static_cast<Index>(j)) * inv_s2) * u * (-0.5 * inv_s2 * u.square()).exp();
    }
    const Vector data_term = -(Z * score) / static_cast<double>(t);

    const PerpVector perp = perp_vector(W, m);
    const double along = perp.h.dot(W.row(m));
    if (std::abs(along) < 1e-12)
        throw DegenerateDemixing("decoupled_gradient: h_m^T w_m numerically zero");
    return data_term - perp.h / along;
}

Vector project_to_tangent(const Vector& w, const Vector& g) {
    return g - w.dot(g) * w;
}

Vector update_row(const Vector& w, const Vector& u, double gamma) {
    Vector stepped = w - gamma * u;
    const double norm = stepped.norm();
    if (norm < 1e-14) throw StepCollapse("update_row: step annihilated the row");
    return stepped / norm;
}

double cost(const Matrix& W, const std::vector<MaxEntModel>& models) {
    const double log_abs_det = W.householderQr().logAbsDeterminant();
    if (!(log_abs_det > std::log(1e-300)))
        throw DegenerateDemixing("cost: |det W| underflow");
    double total = -log_abs_det;
    for (const auto& model : models) total += entropy(model);
    return total;
}

namespace {

struct RowOutcome {
    Vector new_row;
    std::optional<MaxEntModel> model;
    bool density_failed = false;
};

struct RowContext {
    const Matrix& Z;
    const IcaConfig& config;
    std::vector<MeasuringSpec>& specs;     // last converged spec per row
    std::vector<Vector>& lambdas;          // last converged multipliers per row
    std::vector<bool>& has_model;
};

// Work unit for row m against a read-only view of W. Mutates nothing shared;
// per-row warm-start state is only read here and written back at the join.
RowOutcome process_row(const Matrix& W, Index m, int iter, const RowContext& ctx) {
    RowOutcome out;
    const Vector w = W.row(m).transpose();
    const Vector y = (W.row(m) * ctx.Z).transpose();

    std::optional<MaxEntModel> model;
    const bool full_refit =
        !ctx.has_model[m] || (iter % ctx.config.refit_period == 0);
    try {
        if (full_refit) {
            model = select_kernels(y, ctx.config.max_local_kernels).model;
        } else {
            const QuadratureGrid grid = QuadratureGrid::from_sample(y);
            try {
                model = fit_model(y, ctx.specs[m], grid, &ctx.lambdas[m]);
            } catch (const Error&) {
                model = select_kernels(y, ctx.config.max_local_kernels).model;
            }
        }
    } catch (const Error&) {
        out.density_failed = true;
        out.new_row = w;
        return out;
    }

    try {
        const Vector g = decoupled_gradient(W, ctx.Z, m, *model);
        const Vector u = project_to_tangent(w, g);
        double gamma = ctx.config.gamma;
        for (int attempt = 0;; ++attempt) {
            try {
                out.new_row = update_row(w, u, gamma);
                break;
            } catch (const StepCollapse&) {
                if (attempt >= 60)
                    throw DegenerateDemixing("row update collapsed repeatedly");
                gamma *= 0.5;
            }
        }
    } catch (const DegenerateDemixing&) {
        // Re-draw the row from its own derived stream and orthogonalize
        // against the other rows of the view, so recovery is deterministic
        // under any sweep schedule.
        Rng rng(derive_seed(ctx.config.seed, Stream::RowRecovery,
                            static_cast<std::uint64_t>(iter),
                            static_cast<std::uint64_t>(m)));
        Vector fresh(W.cols());
        for (;;) {
            for (Index j = 0; j < fresh.size(); ++j) fresh(j) = rng.normal();
            for (Index j = 0; j < W.rows(); ++j) {
                if (j == m) continue;
                const Vector other = W.row(j).transpose();
                const double nn = other.squaredNorm();
                if (nn > 0.0) fresh -= (fresh.dot(other) / nn) * other;
            }
            if (fresh.norm() > 1e-8) break;
        }
        out.new_row = fresh / fresh.norm();
    }
    out.model = std::move(model);
    return out;
}

}  // namespace

IcaResult run_ica(const Matrix& X, const IcaConfig& config,
                  const IterObserver& observer) {
    config.validate();
    const Index n = X.rows();

    CenterResult centered = center(X);
    WhitenResult whitened = whiten(centered.centered);
    whitened.transform.mean = std::move(centered.mean);
    const Matrix& Z = whitened.Z;

    DemixingState state;
    state.W = init_demixing(Z, config.init, derive_seed(config.seed, Stream::IcaInit));
    state.models.resize(n);
    state.small_sample = X.cols() <= 10 * n;

    std::vector<MeasuringSpec> specs(n);
    std::vector<Vector> lambdas(n);
    std::vector<bool> has_model(n, false);
    RowContext ctx{Z, config, specs, lambdas, has_model};

    const bool jacobi = config.workers >= 1 || config.force_jacobi;
    std::unique_ptr<RowPool> pool;
    if (config.workers >= 2)
        pool = std::make_unique<RowPool>(
            static_cast<int>(std::min<Index>(config.workers, n)));

    std::vector<RowOutcome> outcomes(n);
    for (int iter = 0; iter < config.max_iters; ++iter) {
        if (jacobi) {
            const Matrix snapshot = state.W;
            if (pool) {
                pool->run(n, [&](Index m) {
                    outcomes[m] = process_row(snapshot, m, iter, ctx);
                });
            } else {
                for (Index m = 0; m < n; ++m)
                    outcomes[m] = process_row(snapshot, m, iter, ctx);
            }
            for (Index m = 0; m < n; ++m) state.W.row(m) = outcomes[m].new_row;
        } else {
            for (Index m = 0; m < n; ++m) {
                outcomes[m] = process_row(state.W, m, iter, ctx);
                state.W.row(m) = outcomes[m].new_row;
            }
        }

        // Join: publish per-row fit state and check for a dead iteration.
        Index failed = 0;
        for (Index m = 0; m < n; ++m) {
            if (outcomes[m].density_failed) {
                ++failed;
                if (!has_model[m])
                    throw DensityFailure(
                        "run_ica: density fit failed for row " + std::to_string(m) +
                        " before any model converged");
                continue;
            }
            if (outcomes[m].model) {
                state.models[m] = std::move(*outcomes[m].model);
                specs[m] = state.models[m].spec;
                lambdas[m] = state.models[m].lambda;
                has_model[m] = true;
            }
        }
        if (failed == n)
            throw DensityFailure("run_ica: every density fit failed in iteration " +
                                 std::to_string(iter));

        const double j_value = cost(state.W, state.models);
        state.cost_trace.push_back(j_value);
        state.iterations_run = iter + 1;
        if (observer) observer(iter, state.W, j_value);

        if (!config.fixed_iterations && iter >= config.lag_k) {
            const double lagged = state.cost_trace[iter - config.lag_k];
            if (std::abs(j_value - lagged) < config.delta) {
                state.converged = true;
                break;
            }
        }
    }

    return {std::move(state), std::move(whitened.transform)};
}

}  // namespace emk
