#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "slr/classify.hpp"
#include "slr/dataio.hpp"
#include "slr/dictionary.hpp"
#include "slr/errors.hpp"
#include "slr/matrix.hpp"
#include "slr/random.hpp"
#include "slr/solvers.hpp"

namespace slr {

enum class ModelKind { chislr, slr, src, eigenface_nn, eigenface_ns };

inline const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::chislr: return "chislr";
        case ModelKind::slr: return "slr";
        case ModelKind::src: return "src";
        case ModelKind::eigenface_nn: return "eigenface_nn";
        case ModelKind::eigenface_ns: return "eigenface_ns";
    }
    return "?";
}

inline ModelKind parse_model(const std::string& s) {
    if (s == "chislr") return ModelKind::chislr;
    if (s == "slr") return ModelKind::slr;
    if (s == "src") return ModelKind::src;
    if (s == "eigenface_nn") return ModelKind::eigenface_nn;
    if (s == "eigenface_ns") return ModelKind::eigenface_ns;
    throw InvalidConfig("unknown model '" + s +
                        "' (expected chislr|slr|src|eigenface_nn|eigenface_ns)");
}

// Parameters of the synthetic data source. Decomposition models draw
// ground-truth problems (dictionary + observation); the vector baselines
// draw noisy copies of per-class template signals.
struct SyntheticSpec {
    std::size_t d = 128;
    std::size_t per_class_atoms = 8;
    std::size_t classes = 7;
    std::size_t tau = 8;
    double noise_sigma = 0.0;     // observation noise for decomposition problems
    double template_noise = 0.1;  // sample noise for src/eigenface templates
};

struct ExperimentConfig {
    ModelKind model = ModelKind::chislr;
    std::string dataset_dir;  // empty selects the synthetic source
    SyntheticSpec synth;
    std::size_t tau_trn = 4;
    std::size_t tau_tst = 8;
    SolverConfig solver;
    std::optional<int> max_outer_iters;  // unset: 600 for chislr, 100 for slr
    std::size_t per_class_train = 15;
    std::size_t per_class_test = 10;
    int runs = 20;
    std::uint64_t base_seed = 0;
    int sparsity_percent = 35;       // OMP budget as a percentage of atom count
    int eigenface_components = 50;   // capped at #train - 1
    int threads = 0;                 // 0 = hardware concurrency
    std::string out_dir;

    void validate() const {
        if (runs < 1) throw InvalidConfig("ExperimentConfig: runs must be >= 1");
        if (tau_trn == 0 || tau_tst == 0)
            throw InvalidConfig("ExperimentConfig: tau values must be >= 1");
        if (per_class_test == 0)
            throw InvalidConfig("ExperimentConfig: per_class_test must be >= 1");
        if (sparsity_percent < 1 || sparsity_percent > 100)
            throw InvalidConfig("ExperimentConfig: sparsity_percent must be in [1, 100]");
        if (eigenface_components < 1)
            throw InvalidConfig("ExperimentConfig: eigenface_components must be >= 1");
        if (threads < 0) throw InvalidConfig("ExperimentConfig: threads must be >= 0");
        solver.validate();
    }

    // Applies the model-dependent pieces: the group weight selects the X-step
    // and the outer iteration budget differs between the two decomposition
    // models (600 group-sparse, 100 plain).
    SolverConfig resolved_solver() const {
        SolverConfig s = solver;
        if (model == ModelKind::slr) s.lambda_g = 0.0;
        s.max_outer_iters =
            max_outer_iters.value_or(model == ModelKind::slr ? 100 : 600);
        return s;
    }

    int resolved_threads() const {
        if (threads > 0) return threads;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }
};

struct BenchmarkResult {
    std::vector<std::string> labels;
    std::vector<ConfusionMatrix> per_run;
    RunAggregate aggregate;

    explicit BenchmarkResult(std::vector<std::string> lbls)
        : labels(std::move(lbls)), aggregate(labels) {}
};

namespace detail {

// Index-sharded worker pool. Results must be written to per-index slots;
// aggregation afterwards runs in index order, so the outcome is independent
// of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline std::vector<std::string> dataset_labels(const std::vector<EmotionSequence>& seqs) {
    std::set<std::string> uniq;
    for (const auto& s : seqs) uniq.insert(s.label);
    return {uniq.begin(), uniq.end()};
}

inline std::size_t label_index(const std::vector<std::string>& labels,
                               const std::string& label) {
    const auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label)
        throw InvalidInput("unknown class label '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

// Neutral-subtracted single-image feature: last frame minus first frame.
inline std::vector<double> emotion_image(const EmotionSequence& seq) {
    std::vector<double> v = seq.frames.back();
    const std::vector<double>& neutral = seq.frames.front();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= neutral[i];
    return v;
}

inline std::size_t omp_sparsity(int percent, std::size_t atom_count) {
    const double frac = static_cast<double>(percent) / 100.0;
    std::size_t k = static_cast<std::size_t>(
        std::ceil(frac * static_cast<double>(atom_count)));
    return std::min(std::max<std::size_t>(k, 1), atom_count);
}

// Per-class template signals plus noisy train/test samples, for benchmarking
// the vector-input baselines on synthetic data.
struct TemplateSet {
    DenseMatrix train;                 // d x (K*per_class_train)
    std::vector<std::size_t> train_labels;
    std::vector<std::vector<double>> test;  // K*per_class_test samples
    std::vector<std::size_t> test_labels;
};

inline TemplateSet generate_templates(std::uint64_t seed, const SyntheticSpec& spec,
                                      std::size_t per_class_train,
                                      std::size_t per_class_test) {
    Rng rng(seed);
    const std::size_t k = spec.classes, d = spec.d;
    std::vector<std::vector<double>> templates(k);
    for (auto& t : templates) {
        t.resize(d);
        for (double& v : t) v = rng.normal();
        const double nrm = norm2(t);
        for (double& v : t) v /= nrm;
    }
    TemplateSet set;
    set.train = DenseMatrix(d, k * per_class_train);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < per_class_train; ++j) {
            const std::size_t col = c * per_class_train + j;
            for (std::size_t i = 0; i < d; ++i)
                set.train(i, col) = templates[c][i] + spec.template_noise * rng.normal();
            set.train_labels.push_back(c);
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < per_class_test; ++j) {
            std::vector<double> sample(d);
            for (std::size_t i = 0; i < d; ++i)
                sample[i] = templates[c][i] + spec.template_noise * rng.normal();
            set.test.push_back(std::move(sample));
            set.test_labels.push_back(c);
        }
    }
    return set;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Benchmark driver
// ---------------------------------------------------------------------------

// Runs one seeded experiment run and returns its confusion matrix.
inline ConfusionMatrix run_single_benchmark_run(
    const ExperimentConfig& cfg, const std::vector<std::string>& labels,
    const std::vector<EmotionSequence>* sequences, std::uint64_t run_seed) {
    const std::size_t k = labels.size();
    std::vector<std::pair<std::size_t, ClassificationReport>> outcomes;
    const int threads = cfg.resolved_threads();

    if (sequences != nullptr) {
        // Dataset mode: split, build dictionary/training features, classify
        // every test unit.
        const TrainTestSplit split =
            split_train_test(*sequences, cfg.per_class_train, cfg.per_class_test, run_seed);
        std::vector<EmotionSequence> train;
        train.reserve(split.train.size());
        for (std::size_t idx : split.train) train.push_back((*sequences)[idx]);

        outcomes.resize(split.test.size());
        if (cfg.model == ModelKind::chislr || cfg.model == ModelKind::slr) {
            const GroupedDictionary dict = build_dictionary(train, cfg.tau_trn);
            const SolverConfig solver = cfg.resolved_solver();
            detail::parallel_for(split.test.size(), threads, [&](std::size_t i) {
                const EmotionSequence& seq = (*sequences)[split.test[i]];
                const DenseMatrix y = build_test_unit(seq, cfg.tau_tst);
                const DecompositionResult res = admm_solve(y, dict, solver);
                outcomes[i] = {detail::label_index(labels, seq.label),
                               residual_classify(y, dict, res)};
            });
        } else if (cfg.model == ModelKind::src) {
            const GroupedDictionary dict = build_dictionary(train, 1);
            const std::size_t sparsity =
                detail::omp_sparsity(cfg.sparsity_percent, dict.atom_count());
            detail::parallel_for(split.test.size(), threads, [&](std::size_t i) {
                const EmotionSequence& seq = (*sequences)[split.test[i]];
                outcomes[i] = {detail::label_index(labels, seq.label),
                               src_classify(detail::emotion_image(seq), dict, sparsity)};
            });
        } else {
            DenseMatrix train_mat(train.front().dim(), train.size());
            std::vector<std::size_t> train_labels;
            for (std::size_t j = 0; j < train.size(); ++j) {
                const std::vector<double> img = detail::emotion_image(train[j]);
                train_mat.set_col(j, img);
                train_labels.push_back(detail::label_index(labels, train[j].label));
            }
            const std::size_t k_comp = std::min<std::size_t>(
                static_cast<std::size_t>(cfg.eigenface_components),
                std::max<std::size_t>(1, train.size() - 1));
            const EigenfaceModel model(train_mat, train_labels, k, k_comp);
            const EigenfaceMode mode = cfg.model == ModelKind::eigenface_nn
                                           ? EigenfaceMode::nearest_neighbor
                                           : EigenfaceMode::nearest_subspace;
            detail::parallel_for(split.test.size(), threads, [&](std::size_t i) {
                const EmotionSequence& seq = (*sequences)[split.test[i]];
                outcomes[i] = {detail::label_index(labels, seq.label),
                               model.classify(detail::emotion_image(seq), mode)};
            });
        }
    } else if (cfg.model == ModelKind::chislr || cfg.model == ModelKind::slr) {
        // Synthetic decomposition problems, class-balanced.
        const SolverConfig solver = cfg.resolved_solver();
        const std::size_t count = k * cfg.per_class_test;
        outcomes.resize(count);
        detail::parallel_for(count, threads, [&](std::size_t i) {
            const std::size_t c = i / cfg.per_class_test;
            const std::size_t t = i % cfg.per_class_test;
            const SyntheticProblem problem = generate_synthetic_for_class(
                mix_seed(run_seed, c, t), cfg.synth.d, cfg.synth.per_class_atoms,
                cfg.synth.classes, cfg.synth.tau, cfg.synth.noise_sigma, c);
            const DecompositionResult res = admm_solve(problem.y, problem.dict, solver);
            outcomes[i] = {c, residual_classify(problem.y, problem.dict, res)};
        });
    } else {
        // Synthetic template samples for the vector baselines.
        const detail::TemplateSet set = detail::generate_templates(
            mix_seed(run_seed, 0x7e3), cfg.synth, cfg.per_class_train, cfg.per_class_test);
        outcomes.resize(set.test.size());
        if (cfg.model == ModelKind::src) {
            const GroupedDictionary dict(
                set.train,
                GroupPartition::contiguous(
                    std::vector<std::size_t>(cfg.synth.classes, cfg.per_class_train)),
                labels);
            const std::size_t sparsity =
                detail::omp_sparsity(cfg.sparsity_percent, dict.atom_count());
            detail::parallel_for(set.test.size(), threads, [&](std::size_t i) {
                outcomes[i] = {set.test_labels[i],
                               src_classify(set.test[i], dict, sparsity)};
            });
        } else {
            const std::size_t k_comp = std::min<std::size_t>(
                static_cast<std::size_t>(cfg.eigenface_components),
                std::max<std::size_t>(1, set.train.cols() - 1));
            const EigenfaceModel model(set.train, set.train_labels, k, k_comp);
            const EigenfaceMode mode = cfg.model == ModelKind::eigenface_nn
                                           ? EigenfaceMode::nearest_neighbor
                                           : EigenfaceMode::nearest_subspace;
            detail::parallel_for(set.test.size(), threads, [&](std::size_t i) {
                outcomes[i] = {set.test_labels[i], model.classify(set.test[i], mode)};
            });
        }
    }

    ConfusionMatrix cm(labels);
    for (const auto& [truth, report] : outcomes) cm.add(truth, report.predicted);
    return cm;
}

inline std::vector<std::string> benchmark_labels(const ExperimentConfig& cfg,
                                                 const std::vector<EmotionSequence>* seqs) {
    if (seqs != nullptr) return detail::dataset_labels(*seqs);
    std::vector<std::string> labels(cfg.synth.classes);
    for (std::size_t c = 0; c < cfg.synth.classes; ++c)
        labels[c] = "class" + std::to_string(c);
    return labels;
}

// ---------------------------------------------------------------------------
// Report writing
// ---------------------------------------------------------------------------

inline void write_resolved_config(const ExperimentConfig& cfg, std::ostream& out) {
    const SolverConfig s = cfg.resolved_solver();
    out << "[experiment]\n";
    out << "model = " << to_string(cfg.model) << "\n";
    out << "runs = " << cfg.runs << "\n";
    out << "base_seed = " << cfg.base_seed << "\n";
    out << "per_class_train = " << cfg.per_class_train << "\n";
    out << "per_class_test = " << cfg.per_class_test << "\n";
    out << "sparsity_percent = " << cfg.sparsity_percent << "\n";
    out << "eigenface_components = " << cfg.eigenface_components << "\n";
    out << "threads = " << cfg.threads << "\n";
    out << "\n[data]\n";
    out << "source = " << (cfg.dataset_dir.empty() ? "synthetic" : "dataset") << "\n";
    out << "dataset_dir = " << cfg.dataset_dir << "\n";
    out << "tau_trn = " << cfg.tau_trn << "\n";
    out << "tau_tst = " << cfg.tau_tst << "\n";
    out << "\n[synthetic]\n";
    out << "d = " << cfg.synth.d << "\n";
    out << "per_class_atoms = " << cfg.synth.per_class_atoms << "\n";
    out << "classes = " << cfg.synth.classes << "\n";
    out << "tau = " << cfg.synth.tau << "\n";
    out << "noise_sigma = " << format_full(cfg.synth.noise_sigma) << "\n";
    out << "template_noise = " << format_full(cfg.synth.template_noise) << "\n";
    out << "\n[solver]\n";
    out << "lambda_L = " << format_full(s.lambda_L) << "\n";
    out << "lambda_g = " << format_full(s.lambda_g) << "\n";
    out << "beta = " << format_full(s.beta) << "\n";
    out << "max_outer_iters = " << s.max_outer_iters << "\n";
    out << "inner_iters = " << s.inner_iters << "\n";
    out << "linearized_iters = " << s.linearized_iters << "\n";
    out << "rel_tol = " << format_full(s.rel_tol) << "\n";
    out << "step_scale = " << format_full(s.step_scale) << "\n";
}

inline void write_sensitivity_table(const ConfusionMatrix& cm, const std::string& model,
                                    std::ostream& out) {
    std::size_t w = std::max<std::size_t>(model.size() + 1, 8);
    for (const auto& l : cm.labels()) w = std::max(w, l.size() + 1);
    out << std::setw(static_cast<int>(w)) << "model";
    for (const auto& l : cm.labels()) out << std::setw(static_cast<int>(w)) << l;
    out << "\n" << std::setw(static_cast<int>(w)) << model;
    for (std::size_t c = 0; c < cm.class_count(); ++c) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", cm.sensitivity(c));
        out << std::setw(static_cast<int>(w)) << buf;
    }
    out << "\n";
}

inline void write_benchmark_report(const ExperimentConfig& cfg, const BenchmarkResult& result,
                                   const std::string& out_dir,
                                   const std::string& note = "") {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream out(fs::path(out_dir) / "config.txt");
        write_resolved_config(cfg, out);
    }
    for (std::size_t r = 0; r < result.per_run.size(); ++r) {
        char dirname[32];
        std::snprintf(dirname, sizeof(dirname), "run_%03zu", r);
        const fs::path run_dir = fs::path(out_dir) / dirname;
        fs::create_directories(run_dir);
        {
            std::ofstream out(run_dir / "confusion.txt");
            result.per_run[r].print(out);
            out << "\ntotal_rate " << format_full(result.per_run[r].total_rate()) << "\n";
        }
        {
            std::ofstream out(run_dir / "confusion.csv");
            result.per_run[r].write_csv(out);
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "confusion_aggregate.txt");
        result.aggregate.pooled().print(out);
    }
    {
        std::ofstream out(fs::path(out_dir) / "confusion_aggregate.csv");
        result.aggregate.pooled().write_csv(out);
    }
    {
        std::ofstream out(fs::path(out_dir) / "summary.txt");
        out << "model " << to_string(cfg.model) << "\n";
        out << "runs_completed " << result.aggregate.runs() << "\n";
        out << "runs_requested " << cfg.runs << "\n";
        out << "total_rate_mean " << format_full(result.aggregate.mean_rate()) << "\n";
        out << "total_rate_std " << format_full(result.aggregate.std_rate()) << "\n";
        out << "run_rates";
        for (double r : result.aggregate.run_rates()) out << " " << format_full(r);
        out << "\n";
        if (!note.empty()) out << "note " << note << "\n";
        out << "\nsensitivity:\n";
        write_sensitivity_table(result.aggregate.pooled(), to_string(cfg.model), out);
        out << "\nconfusion (pooled, rows = truth, cols = prediction):\n";
        result.aggregate.pooled().print(out);
    }
}

// Runs the full benchmark: `runs` seeded repetitions, each with seed
// base_seed + r. On solver divergence a partial report is written before the
// error propagates.
inline BenchmarkResult run_benchmark(const ExperimentConfig& cfg,
                                     std::ostream* progress = nullptr) {
    cfg.validate();

    std::vector<EmotionSequence> sequences;
    const std::vector<EmotionSequence>* seq_ptr = nullptr;
    if (!cfg.dataset_dir.empty()) {
        sequences = load_sequence_dir(cfg.dataset_dir);
        if (sequences.empty()) throw InsufficientData("run_benchmark: dataset is empty");
        seq_ptr = &sequences;
    }

    BenchmarkResult result(benchmark_labels(cfg, seq_ptr));
    for (int r = 0; r < cfg.runs; ++r) {
        const std::uint64_t run_seed = cfg.base_seed + static_cast<std::uint64_t>(r);
        try {
            ConfusionMatrix cm =
                run_single_benchmark_run(cfg, result.labels, seq_ptr, run_seed);
            result.per_run.push_back(cm);
            result.aggregate.add_run(cm);
        } catch (const NonFiniteIterate&) {
            if (!cfg.out_dir.empty())
                write_benchmark_report(cfg, result, cfg.out_dir,
                                       "aborted: solver divergence in run " +
                                           std::to_string(r));
            throw;
        }
        if (progress != nullptr)
            *progress << "run " << (r + 1) << "/" << cfg.runs << " rate "
                      << result.per_run.back().total_rate() << "\n";
    }
    if (!cfg.out_dir.empty()) write_benchmark_report(cfg, result, cfg.out_dir);
    return result;
}

// ---------------------------------------------------------------------------
// Config file: flat key=value lines under [section] headers. Unknown keys are
// rejected. Command-line flags are applied after this, so flags win.
// ---------------------------------------------------------------------------

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& section,
                               const std::string& key, const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;
    auto as_u64 = [&](const std::string& v) -> std::uint64_t {
        try {
            return std::stoull(v);
        } catch (...) {
            throw InvalidConfig("config: bad integer for " + full + ": '" + v + "'");
        }
    };
    auto as_int = [&](const std::string& v) -> int {
        try {
            return std::stoi(v);
        } catch (...) {
            throw InvalidConfig("config: bad integer for " + full + ": '" + v + "'");
        }
    };
    auto as_double = [&](const std::string& v) -> double {
        try {
            return std::stod(v);
        } catch (...) {
            throw InvalidConfig("config: bad number for " + full + ": '" + v + "'");
        }
    };

    if (full == "experiment.model") cfg.model = parse_model(value);
    else if (full == "experiment.runs") cfg.runs = as_int(value);
    else if (full == "experiment.base_seed") cfg.base_seed = as_u64(value);
    else if (full == "experiment.per_class_train") cfg.per_class_train = as_u64(value);
    else if (full == "experiment.per_class_test") cfg.per_class_test = as_u64(value);
    else if (full == "experiment.sparsity_percent") cfg.sparsity_percent = as_int(value);
    else if (full == "experiment.eigenface_components")
        cfg.eigenface_components = as_int(value);
    else if (full == "experiment.threads") cfg.threads = as_int(value);
    else if (full == "experiment.out_dir") cfg.out_dir = value;
    else if (full == "data.dataset_dir") cfg.dataset_dir = value;
    else if (full == "data.tau_trn") cfg.tau_trn = as_u64(value);
    else if (full == "data.tau_tst") cfg.tau_tst = as_u64(value);
    else if (full == "synthetic.d") cfg.synth.d = as_u64(value);
    else if (full == "synthetic.per_class_atoms") cfg.synth.per_class_atoms = as_u64(value);
    else if (full == "synthetic.classes") cfg.synth.classes = as_u64(value);
    else if (full == "synthetic.tau") cfg.synth.tau = as_u64(value);
    else if (full == "synthetic.noise_sigma") cfg.synth.noise_sigma = as_double(value);
    else if (full == "synthetic.template_noise") cfg.synth.template_noise = as_double(value);
    else if (full == "solver.lambda_L") cfg.solver.lambda_L = as_double(value);
    else if (full == "solver.lambda_g") cfg.solver.lambda_g = as_double(value);
    else if (full == "solver.beta") cfg.solver.beta = as_double(value);
    else if (full == "solver.max_outer_iters") cfg.max_outer_iters = as_int(value);
    else if (full == "solver.inner_iters") cfg.solver.inner_iters = as_int(value);
    else if (full == "solver.linearized_iters") cfg.solver.linearized_iters = as_int(value);
    else if (full == "solver.rel_tol") cfg.solver.rel_tol = as_double(value);
    else if (full == "solver.step_scale") cfg.solver.step_scale = as_double(value);
    else throw InvalidConfig("config: unknown key '" + full + "'");
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("config: cannot open " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string trimmed = line.substr(first, last - first + 1);
        if (trimmed[0] == '#' || trimmed[0] == ';') continue;
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']')
                throw InvalidConfig("config: bad section header at line " +
                                    std::to_string(lineno));
            section = trimmed.substr(1, trimmed.size() - 2);
            continue;
        }
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("config: expected key=value at line " +
                                std::to_string(lineno));
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_entry(cfg, section, strip(trimmed.substr(0, eq)),
                           strip(trimmed.substr(eq + 1)));
    }
}

}  // namespace slr
