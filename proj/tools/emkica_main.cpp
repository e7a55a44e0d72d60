// emkica: blind source separation by maximum-entropy ICA.
// Subcommands: gen, separate, density, bench, demix-images.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "emk/csv.hpp"
#include "emk/errors.hpp"
#include "emk/maxent.hpp"
#include "emk/metrics.hpp"
#include "emk/optimizer.hpp"
#include "emk/pgm.hpp"
#include "emk/preprocess.hpp"
#include "emk/rng.hpp"
#include "emk/sources.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace emk;

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 1 usage, 2 I/O or format, 3 rank-deficient input,
// 4 density-fit failure.
enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kRank = 3, kDensity = 4 };

class PhaseClock {
public:
    void start(const std::string& phase) {
        phase_ = phase;
        t0_ = std::chrono::steady_clock::now();
    }
    void stop() {
        const auto dt = std::chrono::steady_clock::now() - t0_;
        seconds_[phase_] += std::chrono::duration<double>(dt).count();
    }
    const std::map<std::string, double>& seconds() const { return seconds_; }

private:
    std::string phase_;
    std::chrono::steady_clock::time_point t0_;
    std::map<std::string, double> seconds_;
};

struct IcaFlags {
    double gamma = 0.01;
    int lag_k = 8;
    double delta = 1e-6;
    int max_iters = 200;
    int max_kernels = 5;
    int refit_period = 1;
    int workers = 0;
    bool jacobi = false;
    std::string init = "fixed-nonlinearity";
};

void add_ica_flags(CLI::App* cmd, IcaFlags& f) {
    cmd->add_option("--gamma", f.gamma, "Gradient step size")->check(CLI::PositiveNumber);
    cmd->add_option("--lag-k", f.lag_k, "Termination lag on the cost")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--delta", f.delta, "Termination tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", f.max_iters, "Iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-kernels", f.max_kernels, "Local kernel cap (0..5)")
        ->check(CLI::Range(0, 5));
    cmd->add_option("--refit-period", f.refit_period,
                    "Iterations between full kernel reselections")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--workers", f.workers, "Parallel lanes (0 = sequential)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--jacobi", f.jacobi, "Snapshot sweep even when sequential");
    cmd->add_option("--init", f.init, "Demixing initialization")
        ->check(CLI::IsMember({"random", "fixed-nonlinearity", "identity"}));
}

IcaConfig to_config(const IcaFlags& f, std::uint64_t seed) {
    IcaConfig config;
    config.gamma = f.gamma;
    config.lag_k = f.lag_k;
    config.delta = f.delta;
    config.max_iters = f.max_iters;
    config.max_local_kernels = f.max_kernels;
    config.refit_period = f.refit_period;
    config.workers = f.workers;
    config.seed = seed;
    config.force_jacobi = f.jacobi;
    if (f.init == "random") config.init = InitStrategy::RandomOrthogonal;
    else if (f.init == "identity") config.init = InitStrategy::Identity;
    else config.init = InitStrategy::FixedNonlinearity;
    return config;
}

json config_json(const IcaConfig& c, const std::string& init_name) {
    return json{{"gamma", c.gamma},
                {"lag_k", c.lag_k},
                {"delta", c.delta},
                {"max_iters", c.max_iters},
                {"max_kernels", c.max_local_kernels},
                {"refit_period", c.refit_period},
                {"workers", c.workers},
                {"jacobi", c.force_jacobi},
                {"init", init_name}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed for " + path.string());
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    std::uint64_t seed, const json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    const PhaseClock& clock) {
    json manifest{{"command", command},
                  {"version", kVersion},
                  {"seed", seed},
                  {"config", config},
                  {"inputs", inputs},
                  {"outputs", outputs},
                  {"seconds", clock.seconds()}};
    write_json(out_dir / "manifest.json", manifest);
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + out);
    return dir;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

// ---------------------------------------------------------------- gen

int cmd_gen(const std::string& kind, Index n, Index t, std::uint64_t seed,
            const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    PhaseClock clock;

    clock.start("generate");
    Matrix sources;
    json source_specs = json::array();
    if (kind == "ggd-mix") {
        GgdSourcesResult res = gen_ggd_mixture_sources(n, t, seed);
        sources = std::move(res.S);
        for (const auto& spec : res.specs) {
            source_specs.push_back(json{{"weights", spec.weights},
                                        {"shapes", spec.shapes},
                                        {"means", spec.means},
                                        {"scales", spec.scales}});
        }
    } else {
        sources = gen_gamma_sources(n, t, seed);
        for (Index i = 0; i < n; ++i)
            source_specs.push_back(json{{"gamma_shape", i + 1}});
    }
    int redraws = 0;
    const Matrix mixing = random_mixing(n, seed, &redraws);
    const Matrix mixtures = mixing * sources;
    clock.stop();

    clock.start("write");
    write_csv((dir / "sources.csv").string(), sources);
    write_csv((dir / "mixing.csv").string(), mixing);
    write_csv((dir / "mixtures.csv").string(), mixtures);
    clock.stop();

    write_manifest(dir, "gen", seed,
                   json{{"kind", kind},
                        {"n", n},
                        {"t", t},
                        {"mixing_redraws", redraws},
                        {"sources", source_specs}},
                   {}, {"sources.csv", "mixing.csv", "mixtures.csv"}, clock);
    return kOk;
}

// ---------------------------------------------------------------- separate

int cmd_separate(const std::string& mixtures_path, const IcaFlags& flags,
                 std::uint64_t seed, const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    PhaseClock clock;

    clock.start("load");
    const Matrix x = read_csv(mixtures_path);
    clock.stop();

    const IcaConfig config = to_config(flags, seed);
    clock.start("separate");
    const IcaResult res = run_ica(x, config);
    clock.stop();
    if (res.state.small_sample)
        std::cerr << "warning: only " << x.cols() << " samples for " << x.rows()
                  << " channels; T > 10 N is recommended\n";

    clock.start("write");
    const Index n = x.rows();
    write_csv((dir / "demixing.csv").string(), res.state.W);
    // Row 0 holds the channel means; rows 1..N hold the forward factor.
    Matrix whitening_out(n + 1, n);
    whitening_out.row(0) = res.whitening.mean.transpose();
    whitening_out.bottomRows(n) = res.whitening.forward;
    write_csv((dir / "whitening.csv").string(), whitening_out);
    const Matrix estimates = res.state.W * res.whitening.apply(x);
    write_csv((dir / "estimates.csv").string(), estimates);
    Matrix trace(static_cast<Index>(res.state.cost_trace.size()), 1);
    for (Index i = 0; i < trace.rows(); ++i)
        trace(i, 0) = res.state.cost_trace[static_cast<std::size_t>(i)];
    write_csv((dir / "cost_trace.csv").string(), trace);
    clock.stop();

    std::vector<std::string> outputs{"demixing.csv", "whitening.csv",
                                     "estimates.csv", "cost_trace.csv"};

    // With ground truth next to the input, also score the separation.
    const fs::path in_dir = fs::path(mixtures_path).parent_path();
    const fs::path mixing_path = in_dir / "mixing.csv";
    const fs::path sources_path = in_dir / "sources.csv";
    if (fs::exists(mixing_path) && fs::exists(sources_path)) {
        clock.start("score");
        const Matrix a = read_csv(mixing_path.string());
        const Matrix s_true = read_csv(sources_path.string());

        SeparationReport report;
        report.gain = gain_matrix(res.state.W, res.whitening, a);
        report.isr_db = isr_db(report.gain);
        Pairing pairing = pair_sources(s_true, estimates);
        report.permutation = std::move(pairing.permutation);
        report.correlations = std::move(pairing.correlations);
        for (const auto& [phase, secs] : clock.seconds())
            report.timing.push_back({phase, secs});
        clock.stop();

        json gain_rows = json::array();
        for (Index i = 0; i < n; ++i) {
            std::vector<double> row(static_cast<std::size_t>(n));
            for (Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = report.gain(i, j);
            gain_rows.push_back(row);
        }
        json timing = json::object();
        for (const auto& t : report.timing) timing[t.phase] = t.seconds;
        write_json(dir / "report.json",
                   json{{"isr_db", report.isr_db},
                        {"converged", res.state.converged},
                        {"iterations", res.state.iterations_run},
                        {"permutation", report.permutation},
                        {"correlations",
                         std::vector<double>(report.correlations.data(),
                                             report.correlations.data() + n)},
                        {"gain", gain_rows},
                        {"seconds", timing}});
        outputs.push_back("report.json");
    }

    write_manifest(dir, "separate", seed, config_json(config, flags.init),
                   {mixtures_path}, outputs, clock);
    return kOk;
}

// ---------------------------------------------------------------- density

int cmd_density(const std::string& sample_path, int max_kernels,
                const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    PhaseClock clock;

    clock.start("load");
    const Matrix raw = read_csv(sample_path);
    if (raw.cols() != 1)
        throw IoError("density: expected a single-column CSV, got " +
                      std::to_string(raw.cols()) + " columns");
    const Vector sample = raw.col(0);
    clock.stop();

    clock.start("fit");
    const KernelSelection sel = select_kernels(sample, max_kernels);
    clock.stop();

    clock.start("write");
    Matrix lambda_out(sel.model.lambda.size(), 1);
    lambda_out.col(0) = sel.model.lambda;
    write_csv((dir / "lambda.csv").string(), lambda_out);

    Matrix kernels(static_cast<Index>(sel.spec.locals.size()), 2);
    for (Index i = 0; i < kernels.rows(); ++i) {
        kernels(i, 0) = sel.spec.locals[static_cast<std::size_t>(i)].mu;
        kernels(i, 1) = sel.spec.locals[static_cast<std::size_t>(i)].sigma;
    }
    if (kernels.rows() > 0) {
        write_csv((dir / "kernels.csv").string(), kernels);
    } else {
        std::ofstream empty(dir / "kernels.csv");  // no local kernels selected
    }

    const Vector pdf = maxent_pdf(sel.model.grid.points, sel.model);
    Matrix grid_out(pdf.size(), 2);
    grid_out.col(0) = sel.model.grid.points;
    grid_out.col(1) = pdf;
    write_csv((dir / "density_grid.csv").string(), grid_out);
    clock.stop();

    json report{{"entropy", entropy(sel.model)},
                {"mdl_trace", sel.mdl_trace},
                {"local_kernels", sel.spec.locals.size()},
                {"small_sample", sel.small_sample},
                {"seconds", clock.seconds()}};
    write_json(dir / "report.json", report);

    write_manifest(dir, "density", 0, json{{"max_kernels", max_kernels}},
                   {sample_path},
                   {"lambda.csv", "kernels.csv", "density_grid.csv", "report.json"},
                   clock);
    return kOk;
}

// ---------------------------------------------------------------- bench

Matrix bench_sources(const std::string& kind, Index n, Index t, std::uint64_t seed) {
    if (kind == "ggd-mix") return gen_ggd_mixture_sources(n, t, seed).S;
    return gen_gamma_sources(n, t, seed);
}

int cmd_bench(const std::string& kind, Index n, std::vector<Index> t_list,
              int runs, const IcaFlags& flags, std::uint64_t seed,
              bool parallel_sweep, std::vector<Index> n_list,
              const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    PhaseClock clock;
    std::vector<std::string> outputs;

    if (!parallel_sweep) {
        clock.start("isr_sweep");
        std::string rows = "t,median_isr_db,mean_isr_db,runs\n";
        for (Index t : t_list) {
            std::vector<double> isrs;
            for (int run = 0; run < runs; ++run) {
                const std::uint64_t run_seed = derive_seed(
                    seed, Stream::BenchRun, static_cast<std::uint64_t>(t),
                    static_cast<std::uint64_t>(run));
                const Matrix s = bench_sources(kind, n, t, run_seed);
                const Matrix a = random_mixing(n, run_seed);
                const IcaResult res = run_ica(a * s, to_config(flags, run_seed));
                isrs.push_back(isr_db(gain_matrix(res.state.W, res.whitening, a)));
            }
            char line[128];
            std::snprintf(line, sizeof(line), "%lld,%.6f,%.6f,%d\n",
                          static_cast<long long>(t), median_of(isrs),
                          mean_of(isrs), runs);
            rows += line;
        }
        clock.stop();
        std::ofstream csv(dir / "isr_vs_T.csv");
        csv << rows;
        outputs.push_back("isr_vs_T.csv");
    } else {
        clock.start("parallel_sweep");
        const Index t = t_list.empty() ? 1000 : t_list.front();
        const int lanes = flags.workers > 0 ? flags.workers : 4;
        std::string rows = "n,t_sequential,t_parallel,speedup\n";
        for (Index sweep_n : n_list) {
            const std::uint64_t run_seed =
                derive_seed(seed, Stream::BenchRun, static_cast<std::uint64_t>(sweep_n));
            const Matrix s = bench_sources(kind, sweep_n, t, run_seed);
            const Matrix a = random_mixing(sweep_n, run_seed);
            const Matrix x = a * s;

            IcaFlags fixed = flags;
            fixed.max_iters = 100;
            fixed.jacobi = true;
            IcaConfig config = to_config(fixed, run_seed);
            config.fixed_iterations = true;

            config.workers = 1;
            const auto t0 = std::chrono::steady_clock::now();
            run_ica(x, config);
            const auto t1 = std::chrono::steady_clock::now();
            config.workers = lanes;
            run_ica(x, config);
            const auto t2 = std::chrono::steady_clock::now();

            const double seq = std::chrono::duration<double>(t1 - t0).count();
            const double par = std::chrono::duration<double>(t2 - t1).count();
            char line[160];
            std::snprintf(line, sizeof(line), "%lld,%.6f,%.6f,%.6f\n",
                          static_cast<long long>(sweep_n), seq, par, seq / par);
            rows += line;
        }
        clock.stop();
        std::ofstream csv(dir / "speedup.csv");
        csv << rows;
        outputs.push_back("speedup.csv");
    }

    json config{{"kind", kind},           {"n", n},
                {"t_list", t_list},       {"runs", runs},
                {"parallel_sweep", parallel_sweep}, {"n_list", n_list},
                {"ica", config_json(to_config(flags, seed), flags.init)}};
    write_manifest(dir, "bench", seed, config, {}, outputs, clock);
    return kOk;
}

// ---------------------------------------------------------------- demix-images

int cmd_demix_images(const std::vector<std::string>& image_paths,
                     const IcaFlags& flags, std::uint64_t seed,
                     bool identity_mixing, const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    PhaseClock clock;

    clock.start("load");
    std::vector<GrayImage> images;
    for (const auto& path : image_paths) images.push_back(read_pgm(path));
    const Index height = images.front().height;
    const Index width = images.front().width;
    for (const auto& img : images)
        if (img.height != height || img.width != width)
            throw IoError("demix-images: image dimensions differ");
    const Index n = static_cast<Index>(images.size());
    const Index t = width * height;

    Matrix s(n, t);
    for (Index i = 0; i < n; ++i)
        for (Index r = 0; r < height; ++r)
            for (Index c = 0; c < width; ++c)
                s(i, r * width + c) = images[static_cast<std::size_t>(i)].pixels(r, c);
    standardize_rows(s);
    clock.stop();

    clock.start("mix");
    const Matrix a = identity_mixing ? Matrix::Identity(n, n).eval()
                                     : random_mixing(n, seed);
    const Matrix x = a * s;
    clock.stop();

    clock.start("separate");
    const IcaConfig config = to_config(flags, seed);
    const IcaResult res = run_ica(x, config);
    clock.stop();

    clock.start("write");
    const Matrix y = res.state.W * res.whitening.apply(x);
    const Pairing pairing = pair_sources(s, y);

    std::vector<std::string> outputs;
    for (Index i = 0; i < n; ++i) {
        Matrix mixed(height, width);
        for (Index r = 0; r < height; ++r)
            for (Index c = 0; c < width; ++c) mixed(r, c) = x(i, r * width + c);
        const std::string name = "mixed_" + std::to_string(i) + ".pgm";
        write_pgm((dir / name).string(), to_image(mixed));
        outputs.push_back(name);
    }

    // recovered_k.pgm is the estimate paired with input image k, sign-aligned
    // so it correlates positively with the original.
    std::vector<double> image_corr(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
        const Index source = pairing.permutation[i];
        Vector estimate = y.row(i).transpose();
        if (estimate.dot(s.row(source).transpose()) < 0.0) estimate = -estimate;
        Matrix rec(height, width);
        for (Index r = 0; r < height; ++r)
            for (Index c = 0; c < width; ++c) rec(r, c) = estimate(r * width + c);
        const GrayImage img = to_image(rec);
        const std::string name = "recovered_" + std::to_string(source) + ".pgm";
        write_pgm((dir / name).string(), img);
        outputs.push_back(name);

        // Correlation of the written 8-bit image against the original pixels.
        Vector quantized(t);
        for (Index r = 0; r < height; ++r)
            for (Index c = 0; c < width; ++c) {
                double v = std::round(img.pixels(r, c));
                quantized(r * width + c) = std::min(255.0, std::max(0.0, v));
            }
        Vector orig(t);
        for (Index r = 0; r < height; ++r)
            for (Index c = 0; c < width; ++c)
                orig(r * width + c) = images[static_cast<std::size_t>(source)].pixels(r, c);
        const Vector qc = quantized.array() - quantized.mean();
        const Vector oc = orig.array() - orig.mean();
        image_corr[static_cast<std::size_t>(source)] =
            std::abs(qc.dot(oc)) / (qc.norm() * oc.norm());
    }
    clock.stop();

    json report{{"correlations", image_corr},
                {"permutation", pairing.permutation},
                {"source_correlations",
                 std::vector<double>(pairing.correlations.data(),
                                     pairing.correlations.data() + n)},
                {"converged", res.state.converged},
                {"iterations", res.state.iterations_run},
                {"identity_mixing", identity_mixing},
                {"seconds", clock.seconds()}};
    write_json(dir / "report.json", report);
    outputs.push_back("report.json");

    json config_j = config_json(config, flags.init);
    config_j["identity_mixing"] = identity_mixing;
    write_manifest(dir, "demix-images", seed, config_j,
                   std::vector<std::string>(image_paths.begin(), image_paths.end()),
                   outputs, clock);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind source separation by maximum-entropy ICA"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Seed for every random stream")
        ->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate benchmark sources and mixtures");
    std::string gen_kind;
    Index gen_n = 8, gen_t = 10000;
    std::string gen_out = "gen_out";
    gen->add_option("kind", gen_kind, "Source family")
        ->required()
        ->check(CLI::IsMember({"ggd-mix", "gamma"}));
    gen->add_option("-n,--sources", gen_n, "Number of sources")
        ->check(CLI::Range(Index(2), Index(1024)));
    gen->add_option("-t,--samples", gen_t, "Samples per source")
        ->check(CLI::PositiveNumber);
    gen->add_option("-o,--out", gen_out, "Output directory");

    // separate
    auto* sep = app.add_subcommand("separate", "Estimate the demixing matrix");
    std::string sep_input;
    std::string sep_out = "separate_out";
    IcaFlags sep_flags;
    sep->add_option("mixtures", sep_input, "mixtures.csv (N x T)")->required();
    sep->add_option("-o,--out", sep_out, "Output directory");
    add_ica_flags(sep, sep_flags);

    // density
    auto* den = app.add_subcommand("density", "Fit the maximum-entropy density");
    std::string den_input;
    std::string den_out = "density_out";
    int den_kernels = 5;
    den->add_option("sample", den_input, "Single-column CSV sample")->required();
    den->add_option("-o,--out", den_out, "Output directory");
    den->add_option("--max-kernels", den_kernels, "Local kernel cap (0..5)")
        ->check(CLI::Range(0, 5));

    // bench
    auto* bench = app.add_subcommand("bench", "Benchmark sweeps");
    std::string bench_kind = "ggd-mix";
    Index bench_n = 4;
    std::vector<Index> bench_t_list{1000, 10000};
    std::vector<Index> bench_n_list{2, 4, 8, 16};
    int bench_runs = 20;
    bool parallel_sweep = false;
    std::string bench_out = "bench_out";
    IcaFlags bench_flags;
    bench->add_option("kind", bench_kind, "Source family")
        ->check(CLI::IsMember({"ggd-mix", "gamma"}));
    bench->add_option("-n,--sources", bench_n, "Sources for the ISR sweep")
        ->check(CLI::Range(Index(2), Index(1024)));
    bench->add_option("--t-list", bench_t_list, "Sample counts to sweep");
    bench->add_option("--runs", bench_runs, "Runs per sweep point")
        ->check(CLI::PositiveNumber);
    bench->add_flag("--parallel-sweep", parallel_sweep,
                    "Measure sequential vs parallel wall time over --n-list");
    bench->add_option("--n-list", bench_n_list, "Source counts for --parallel-sweep");
    bench->add_option("-o,--out", bench_out, "Output directory");
    add_ica_flags(bench, bench_flags);

    // demix-images
    auto* demix = app.add_subcommand("demix-images", "Mix and recover grayscale images");
    std::vector<std::string> image_paths;
    std::string demix_out = "images_out";
    bool identity_mixing = false;
    IcaFlags demix_flags;
    demix->add_option("images", image_paths, "At least two equal-size P5 PGM files")
        ->required()
        ->expected(-2);
    demix->add_option("-o,--out", demix_out, "Output directory");
    demix->add_flag("--identity-mixing", identity_mixing,
                    "Skip mixing; feed the standardized images directly");
    add_ica_flags(demix, demix_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_kind, gen_n, gen_t, seed, gen_out);
        if (sep->parsed())
            return cmd_separate(sep_input, sep_flags, seed, sep_out);
        if (den->parsed())
            return cmd_density(den_input, den_kernels, den_out);
        if (bench->parsed())
            return cmd_bench(bench_kind, bench_n, bench_t_list, bench_runs,
                             bench_flags, seed, parallel_sweep, bench_n_list,
                             bench_out);
        if (demix->parsed())
            return cmd_demix_images(image_paths, demix_flags, seed,
                                    identity_mixing, demix_out);
    } catch (const RankDeficient& e) {
        std::cerr << "error (rank): " << e.what() << "\n";
        return kRank;
    } catch (const DensityFailure& e) {
        std::cerr << "error (density): " << e.what() << "\n";
        return kDensity;
    } catch (const IoError& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return kIo;
    } catch (const InvalidParameter& e) {
        std::cerr << "error (usage): " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}
