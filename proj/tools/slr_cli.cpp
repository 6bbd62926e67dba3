// Command-line front end: benchmark runner plus standalone access to the
// decomposition solvers, synthetic problem generator, single-unit
// classification, and matrix inspection.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slr/classify.hpp"
#include "slr/dataio.hpp"
#include "slr/harness.hpp"
#include "slr/matrix.hpp"
#include "slr/solvers.hpp"
#include "slr/svd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

std::string timestamped_dir(const std::string& prefix) {
    const std::time_t now = std::time(nullptr);
    std::tm tm_buf{};
    localtime_r(&now, &tm_buf);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y%m%d_%H%M%S", &tm_buf);
    return prefix + "_" + buf;
}

// Solver flag bundle shared by benchmark/solve/classify.
struct SolverFlags {
    std::optional<double> lambda_L, lambda_g, beta, rel_tol, step_scale;
    std::optional<int> max_outer, inner, linearized;

    void attach(CLI::App* cmd) {
        cmd->add_option("--lambda-l", lambda_L, "Nuclear-norm weight");
        cmd->add_option("--lambda-g", lambda_g, "Group-sparsity weight");
        cmd->add_option("--beta", beta, "Augmented-Lagrangian penalty");
        cmd->add_option("--iters", max_outer, "Outer iteration cap");
        cmd->add_option("--inner-iters", inner, "Lasso (FISTA) iterations per outer step");
        cmd->add_option("--linearized-iters", linearized,
                        "Prox-gradient sub-iterations per outer step");
        cmd->add_option("--rel-tol", rel_tol, "Relative primal residual stop");
        cmd->add_option("--step-scale", step_scale, "Step-size safety factor in (0,1]");
    }

    void apply(slr::ExperimentConfig& cfg) const {
        if (lambda_L) cfg.solver.lambda_L = *lambda_L;
        if (lambda_g) cfg.solver.lambda_g = *lambda_g;
        if (beta) cfg.solver.beta = *beta;
        if (max_outer) cfg.max_outer_iters = *max_outer;
        if (inner) cfg.solver.inner_iters = *inner;
        if (linearized) cfg.solver.linearized_iters = *linearized;
        if (rel_tol) cfg.solver.rel_tol = *rel_tol;
        if (step_scale) cfg.solver.step_scale = *step_scale;
    }
};

int cmd_benchmark(const std::string& config_file, const slr::ExperimentConfig& flag_overlay,
                  const SolverFlags& solver_flags,
                  const std::vector<std::string>& provided) {
    slr::ExperimentConfig cfg;
    if (!config_file.empty()) slr::load_config_file(cfg, config_file);

    // Flags win over the config file.
    auto has = [&](const std::string& name) {
        return std::find(provided.begin(), provided.end(), name) != provided.end();
    };
    if (has("model")) cfg.model = flag_overlay.model;
    if (has("dataset")) cfg.dataset_dir = flag_overlay.dataset_dir;
    if (has("runs")) cfg.runs = flag_overlay.runs;
    if (has("seed")) cfg.base_seed = flag_overlay.base_seed;
    if (has("tau-trn")) cfg.tau_trn = flag_overlay.tau_trn;
    if (has("tau-tst")) cfg.tau_tst = flag_overlay.tau_tst;
    if (has("train")) cfg.per_class_train = flag_overlay.per_class_train;
    if (has("test")) cfg.per_class_test = flag_overlay.per_class_test;
    if (has("sparsity-percent")) cfg.sparsity_percent = flag_overlay.sparsity_percent;
    if (has("eigenface-components"))
        cfg.eigenface_components = flag_overlay.eigenface_components;
    if (has("threads")) cfg.threads = flag_overlay.threads;
    if (has("out")) cfg.out_dir = flag_overlay.out_dir;
    if (has("synth-d")) cfg.synth.d = flag_overlay.synth.d;
    if (has("synth-atoms")) cfg.synth.per_class_atoms = flag_overlay.synth.per_class_atoms;
    if (has("synth-classes")) cfg.synth.classes = flag_overlay.synth.classes;
    if (has("synth-tau")) cfg.synth.tau = flag_overlay.synth.tau;
    if (has("synth-noise")) cfg.synth.noise_sigma = flag_overlay.synth.noise_sigma;
    if (has("template-noise")) cfg.synth.template_noise = flag_overlay.synth.template_noise;
    solver_flags.apply(cfg);

    if (cfg.out_dir.empty()) cfg.out_dir = timestamped_dir("slr_benchmark");
    cfg.validate();

    const slr::BenchmarkResult result = slr::run_benchmark(cfg, &std::cout);
    std::printf("total rate %.4f +/- %.4f over %zu runs\n", result.aggregate.mean_rate(),
                result.aggregate.std_rate(), result.aggregate.runs());
    std::printf("report written to %s\n", cfg.out_dir.c_str());
    return kExitOk;
}

int cmd_solve(const std::string& y_path, const std::string& dict_path,
              const std::string& manifest_path, const std::string& model,
              const SolverFlags& solver_flags, std::string out_dir) {
    slr::ExperimentConfig overlay;
    overlay.model = slr::parse_model(model);
    if (overlay.model != slr::ModelKind::chislr && overlay.model != slr::ModelKind::slr)
        throw slr::InvalidConfig("solve: model must be chislr or slr");
    solver_flags.apply(overlay);

    const slr::DenseMatrix y = slr::read_csv_file(y_path);
    const slr::GroupedDictionary dict = slr::load_dictionary(dict_path, manifest_path);
    const slr::SolverConfig solver = overlay.resolved_solver();

    if (out_dir.empty()) out_dir = timestamped_dir("slr_solve");
    std::filesystem::create_directories(out_dir);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    try {
        const slr::DecompositionResult res = slr::admm_solve(y, dict, solver);
        slr::write_csv(res.x, out("x.csv"));
        slr::write_csv(res.l, out("l.csv"));
        std::ofstream hist(out("residuals.csv"));
        hist << "iteration,relative_residual\n";
        for (std::size_t i = 0; i < res.residual_history.size(); ++i)
            hist << (i + 1) << "," << slr::format_full(res.residual_history[i]) << "\n";
        std::printf("x_step %s\n", slr::to_string(res.x_step));
        std::printf("iterations %d converged %s final_residual %.6e\n", res.iterations_run,
                    res.converged ? "yes" : "no",
                    res.residual_history.empty() ? 0.0 : res.residual_history.back());
        std::printf("outputs written to %s\n", out_dir.c_str());
    } catch (const slr::NonFiniteIterate& e) {
        std::ofstream hist(out("residuals.csv"));
        hist << "iteration,relative_residual\n";
        for (std::size_t i = 0; i < e.residual_history.size(); ++i)
            hist << (i + 1) << "," << slr::format_full(e.residual_history[i]) << "\n";
        std::fprintf(stderr, "error: %s (partial history written to %s)\n", e.what(),
                     out_dir.c_str());
        return kExitDivergence;
    }
    return kExitOk;
}

int cmd_synth(std::uint64_t seed, std::size_t d, std::size_t per_class_atoms,
              std::size_t classes, std::size_t tau, double noise, std::string out_dir) {
    const slr::SyntheticProblem problem =
        slr::generate_synthetic(seed, d, per_class_atoms, classes, tau, noise);

    if (out_dir.empty()) out_dir = timestamped_dir("slr_synth");
    std::filesystem::create_directories(out_dir);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    slr::save_dictionary(problem.dict, out("dict.csv"), out("dict_manifest.txt"), 0, tau);
    slr::write_csv(problem.y, out("y.csv"));
    slr::write_csv(problem.x_true, out("x_true.csv"));
    slr::write_csv(problem.l_true, out("l_true.csv"));
    {
        std::ofstream manifest(out("problem.txt"));
        manifest << "seed " << seed << "\n";
        manifest << "d " << d << "\n";
        manifest << "per_class_atoms " << per_class_atoms << "\n";
        manifest << "classes " << classes << "\n";
        manifest << "tau " << tau << "\n";
        manifest << "noise_sigma " << slr::format_full(noise) << "\n";
        manifest << "active_class " << problem.active_class << "\n";
    }
    std::printf("synthetic problem written to %s (active class %zu)\n", out_dir.c_str(),
                problem.active_class);
    return kExitOk;
}

int cmd_classify(const std::string& y_path, const std::string& dict_path,
                 const std::string& manifest_path, const std::string& model,
                 int sparsity_percent, const SolverFlags& solver_flags) {
    slr::ExperimentConfig overlay;
    overlay.model = slr::parse_model(model);
    solver_flags.apply(overlay);

    const slr::DenseMatrix y = slr::read_csv_file(y_path);
    const slr::GroupedDictionary dict = slr::load_dictionary(dict_path, manifest_path);

    slr::ClassificationReport report;
    if (overlay.model == slr::ModelKind::chislr || overlay.model == slr::ModelKind::slr) {
        const slr::DecompositionResult res =
            slr::admm_solve(y, dict, overlay.resolved_solver());
        report = slr::residual_classify(y, dict, res);
        std::printf("solver iterations %d final_residual %.6e\n", res.iterations_run,
                    res.residual_history.empty() ? 0.0 : res.residual_history.back());
    } else if (overlay.model == slr::ModelKind::src) {
        if (y.cols() != 1)
            throw slr::InvalidInput("classify: src expects a single-column matrix");
        const std::size_t sparsity = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(static_cast<double>(sparsity_percent) /
                                                  100.0 *
                                                  static_cast<double>(dict.atom_count()))));
        report = slr::src_classify(y.col(0), dict, std::min(sparsity, dict.atom_count()));
    } else {
        throw slr::InvalidConfig("classify: model must be chislr, slr, or src");
    }

    for (std::size_t c = 0; c < report.residuals.size(); ++c)
        std::printf("%-16s %.10e\n", dict.labels()[c].c_str(), report.residuals[c]);
    std::printf("predicted %s (margin %.6e)\n", dict.labels()[report.predicted].c_str(),
                report.margin);
    return kExitOk;
}

int cmd_inspect(const std::string& path) {
    const slr::DenseMatrix m = slr::read_csv_file(path);
    double lo = m(0, 0), hi = m(0, 0);
    for (double v : m.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::printf("file            %s\n", path.c_str());
    std::printf("shape           %zu x %zu\n", m.rows(), m.cols());
    std::printf("min             %.10g\n", lo);
    std::printf("max             %.10g\n", hi);
    std::printf("entrywise_l1    %.10g\n", slr::norm(m, slr::NormKind::entrywise_l1));
    std::printf("frobenius       %.10g\n", slr::norm(m, slr::NormKind::frobenius));
    std::printf("nuclear         %.10g\n", slr::norm(m, slr::NormKind::nuclear));
    std::printf("spectral        %.10g\n", slr::norm(m, slr::NormKind::spectral));
    std::printf("numerical_rank  %zu\n", slr::numerical_rank(m));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse + low-rank decomposition models for multichannel signal "
                 "classification"};
    app.require_subcommand(1);

    // --- benchmark ---
    auto* bench = app.add_subcommand("benchmark", "Run a seeded multi-run experiment");
    std::string config_file;
    slr::ExperimentConfig overlay;
    std::string bench_model = "chislr";
    SolverFlags bench_solver;
    bench->add_option("--config", config_file, "Config file (key=value with sections)");
    bench->add_option("--model", bench_model,
                      "chislr|slr|src|eigenface_nn|eigenface_ns")->group("Experiment");
    bench->add_option("--dataset", overlay.dataset_dir,
                      "Dataset root (omit to use the synthetic source)");
    bench->add_option("--runs", overlay.runs, "Number of seeded runs");
    bench->add_option("--seed", overlay.base_seed, "Base seed; run r uses base_seed + r");
    bench->add_option("--tau-trn", overlay.tau_trn, "Training columns per sequence");
    bench->add_option("--tau-tst", overlay.tau_tst, "Test unit column count");
    bench->add_option("--train", overlay.per_class_train, "Training sequences per class");
    bench->add_option("--test", overlay.per_class_test, "Test sequences per class");
    bench->add_option("--sparsity-percent", overlay.sparsity_percent,
                      "OMP sparsity as % of atom count");
    bench->add_option("--eigenface-components", overlay.eigenface_components,
                      "Eigenface component cap");
    bench->add_option("--threads", overlay.threads, "Worker threads (0 = hardware)");
    bench->add_option("--out", overlay.out_dir, "Output directory");
    bench->add_option("--synth-d", overlay.synth.d, "Synthetic signal dimension");
    bench->add_option("--synth-atoms", overlay.synth.per_class_atoms,
                      "Synthetic atoms per class");
    bench->add_option("--synth-classes", overlay.synth.classes, "Synthetic class count");
    bench->add_option("--synth-tau", overlay.synth.tau, "Synthetic channel count");
    bench->add_option("--synth-noise", overlay.synth.noise_sigma,
                      "Synthetic observation noise sigma");
    bench->add_option("--template-noise", overlay.synth.template_noise,
                      "Synthetic template sample noise");
    bench_solver.attach(bench);

    // --- solve ---
    auto* solve = app.add_subcommand("solve", "Decompose one observation matrix");
    std::string solve_y, solve_dict, solve_manifest, solve_model = "chislr", solve_out;
    SolverFlags solve_solver;
    solve->add_option("--y", solve_y, "Observation CSV")->required();
    solve->add_option("--dict", solve_dict, "Dictionary CSV")->required();
    solve->add_option("--manifest", solve_manifest, "Dictionary manifest")->required();
    solve->add_option("--model", solve_model, "chislr|slr");
    solve->add_option("--out", solve_out, "Output directory");
    solve_solver.attach(solve);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate a synthetic ground-truth problem");
    std::uint64_t synth_seed = 0;
    std::size_t synth_d = 128, synth_atoms = 8, synth_classes = 7, synth_tau = 8;
    double synth_noise = 0.0;
    std::string synth_out;
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--d", synth_d, "Signal dimension");
    synth->add_option("--per-class-atoms", synth_atoms, "Atoms per class");
    synth->add_option("--classes", synth_classes, "Class count");
    synth->add_option("--tau", synth_tau, "Channel count");
    synth->add_option("--noise", synth_noise, "Observation noise sigma");
    synth->add_option("--out", synth_out, "Output directory");

    // --- classify ---
    auto* classify = app.add_subcommand("classify", "Classify a single test unit");
    std::string cls_y, cls_dict, cls_manifest, cls_model = "chislr";
    int cls_sparsity = 35;
    SolverFlags cls_solver;
    classify->add_option("--y", cls_y, "Test unit CSV")->required();
    classify->add_option("--dict", cls_dict, "Dictionary CSV")->required();
    classify->add_option("--manifest", cls_manifest, "Dictionary manifest")->required();
    classify->add_option("--model", cls_model, "chislr|slr|src");
    classify->add_option("--sparsity-percent", cls_sparsity, "OMP sparsity (src only)");
    cls_solver.attach(classify);

    // --- inspect ---
    auto* inspect = app.add_subcommand("inspect", "Print matrix statistics");
    std::string inspect_path;
    inspect->add_option("file", inspect_path, "CSV matrix file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (bench->parsed()) {
            std::vector<std::string> provided;
            for (const auto* opt : bench->get_options())
                if (opt->count() > 0 && opt->get_name(false, true).size() > 2)
                    provided.push_back(opt->get_name(false, true).substr(2));
            return cmd_benchmark(config_file, overlay, bench_solver, provided);
        }
        if (solve->parsed())
            return cmd_solve(solve_y, solve_dict, solve_manifest, solve_model, solve_solver,
                             solve_out);
        if (synth->parsed())
            return cmd_synth(synth_seed, synth_d, synth_atoms, synth_classes, synth_tau,
                             synth_noise, synth_out);
        if (classify->parsed())
            return cmd_classify(cls_y, cls_dict, cls_manifest, cls_model, cls_sparsity,
                                cls_solver);
        if (inspect->parsed()) return cmd_inspect(inspect_path);
    } catch (const slr::InvalidConfig& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const slr::NonFiniteIterate& e) {
        std::fprintf(stderr, "solver divergence: %s\n", e.what());
        return kExitDivergence;
    } catch (const slr::Error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitConfig;
}
