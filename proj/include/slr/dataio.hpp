#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slr/dictionary.hpp"
#include "slr/errors.hpp"
#include "slr/matrix.hpp"
#include "slr/pgm.hpp"
#include "slr/random.hpp"

namespace slr {

// One labeled image sequence. Frames are flattened grayscale vectors scaled
// to [0,1]; the first frame is by convention the neutral face.
struct EmotionSequence {
    std::string label;
    std::vector<std::vector<double>> frames;

    std::size_t dim() const { return frames.empty() ? 0 : frames.front().size(); }
    std::size_t frame_count() const { return frames.size(); }
};

enum class DatasetLayout {
    // <root>/<class_name>/<sequence_id>/<frame_####>.pgm
    class_sequence_frames
};

// Loads every sequence under `root`, sorted by class name, then sequence id,
// then frame filename. All frames must decode to the same dimension and each
// sequence needs at least two frames.
inline std::vector<EmotionSequence> load_sequence_dir(
    const std::string& root, DatasetLayout layout = DatasetLayout::class_sequence_frames) {
    (void)layout;  // single supported layout
    namespace fs = std::filesystem;
    if (!fs::is_directory(root))
        throw InvalidInput("load_sequence_dir: not a directory: " + root);

    std::vector<std::string> class_dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) class_dirs.push_back(e.path().filename().string());
    std::sort(class_dirs.begin(), class_dirs.end());

    std::vector<EmotionSequence> sequences;
    std::size_t dim = 0;
    for (const auto& cls : class_dirs) {
        std::vector<std::string> seq_dirs;
        for (const auto& e : fs::directory_iterator(fs::path(root) / cls))
            if (e.is_directory()) seq_dirs.push_back(e.path().filename().string());
        std::sort(seq_dirs.begin(), seq_dirs.end());

        for (const auto& seq_id : seq_dirs) {
            std::vector<std::string> frame_files;
            for (const auto& e : fs::directory_iterator(fs::path(root) / cls / seq_id))
                if (e.is_regular_file() && e.path().extension() == ".pgm")
                    frame_files.push_back(e.path().filename().string());
            std::sort(frame_files.begin(), frame_files.end());

            EmotionSequence seq;
            seq.label = cls;
            for (const auto& f : frame_files) {
                const PgmImage img = read_pgm((fs::path(root) / cls / seq_id / f).string());
                std::vector<double> v = pgm_to_unit_vector(img);
                if (dim == 0) dim = v.size();
                if (v.size() != dim)
                    throw InconsistentDimensions("load_sequence_dir: frame " + f + " in " +
                                                 seq_id + " has " + std::to_string(v.size()) +
                                                 " pixels, expected " + std::to_string(dim));
                seq.frames.push_back(std::move(v));
            }
            if (seq.frame_count() < 2)
                throw MissingFrames("load_sequence_dir: sequence " + seq_id + " under " + cls +
                                    " has " + std::to_string(seq.frame_count()) +
                                    " frames (need >= 2)");
            sequences.push_back(std::move(seq));
        }
    }
    return sequences;
}

// Dictionary construction: per training sequence, emit the last tau_trn
// frames with the first (neutral) frame subtracted, then group columns by
// class label (labels sorted, columns contiguous per class) and
// unit-normalize. A zero difference column (identical frames) is rejected.
inline GroupedDictionary build_dictionary(const std::vector<EmotionSequence>& sequences,
                                          std::size_t tau_trn) {
    if (tau_trn == 0) throw InvalidInput("build_dictionary: tau_trn must be >= 1");
    if (sequences.empty()) throw InsufficientData("build_dictionary: no sequences");

    std::map<std::string, std::vector<const EmotionSequence*>> by_class;
    for (const auto& s : sequences) by_class[s.label].push_back(&s);

    const std::size_t d = sequences.front().dim();
    std::vector<std::string> labels;
    std::vector<std::size_t> group_sizes;
    std::vector<double> columns;  // column-major staging
    std::size_t n = 0;

    for (const auto& [label, seqs] : by_class) {
        labels.push_back(label);
        group_sizes.push_back(seqs.size() * tau_trn);
        for (const EmotionSequence* s : seqs) {
            if (s->dim() != d)
                throw InconsistentDimensions("build_dictionary: sequence dimension " +
                                             std::to_string(s->dim()) + " vs " +
                                             std::to_string(d));
            if (s->frame_count() < tau_trn + 1)
                throw TooFewFrames("build_dictionary: sequence with " +
                                   std::to_string(s->frame_count()) + " frames cannot yield " +
                                   std::to_string(tau_trn) + " training columns");
            const std::vector<double>& neutral = s->frames.front();
            const std::size_t t_end = s->frame_count();
            for (std::size_t t = t_end - tau_trn; t < t_end; ++t) {
                double norm_sq = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    const double v = s->frames[t][i] - neutral[i];
                    columns.push_back(v);
                    norm_sq += v * v;
                }
                if (norm_sq == 0.0)
                    throw ZeroAtom("build_dictionary: frame " + std::to_string(t + 1) +
                                   " identical to the neutral frame");
                ++n;
            }
        }
    }

    DenseMatrix atoms(d, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < d; ++i) atoms(i, j) = columns[j * d + i];
    return GroupedDictionary(std::move(atoms), GroupPartition::contiguous(group_sizes),
                             std::move(labels));
}

// Test unit: the first frame (not assumed neutral) followed by the last
// tau_tst-1 frames in chronological order. Raw intensities, no subtraction.
inline DenseMatrix build_test_unit(const EmotionSequence& sequence, std::size_t tau_tst) {
    if (tau_tst == 0) throw InvalidInput("build_test_unit: tau_tst must be >= 1");
    if (sequence.frame_count() < tau_tst)
        throw TooFewFrames("build_test_unit: sequence has " +
                           std::to_string(sequence.frame_count()) + " frames, need " +
                           std::to_string(tau_tst));
    const std::size_t d = sequence.dim();
    const std::size_t t_total = sequence.frame_count();
    DenseMatrix y(d, tau_tst);
    y.set_col(0, sequence.frames.front());
    for (std::size_t j = 1; j < tau_tst; ++j)
        y.set_col(j, sequence.frames[t_total - tau_tst + j]);
    return y;
}

// Stratified seeded split; index sets into `sequences`, disjoint, sampled
// uniformly without replacement per class.
struct TrainTestSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

inline TrainTestSplit split_train_test(const std::vector<EmotionSequence>& sequences,
                                       std::size_t per_class_train,
                                       std::size_t per_class_test, std::uint64_t seed) {
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < sequences.size(); ++i)
        by_class[sequences[i].label].push_back(i);

    Rng rng(seed);
    TrainTestSplit split;
    for (auto& [label, indices] : by_class) {
        if (indices.size() < per_class_train + per_class_test)
            throw InsufficientData("split_train_test: class '" + label + "' has " +
                                   std::to_string(indices.size()) + " sequences, need " +
                                   std::to_string(per_class_train + per_class_test));
        rng.shuffle(indices);
        for (std::size_t k = 0; k < per_class_train; ++k) split.train.push_back(indices[k]);
        for (std::size_t k = 0; k < per_class_test; ++k)
            split.test.push_back(indices[per_class_train + k]);
    }
    return split;
}

// ---------------------------------------------------------------------------
// Synthetic ground-truth problems
// ---------------------------------------------------------------------------

// A decomposition instance with known ground truth: y = D x_true + l_true
// (+ optional Gaussian noise), x_true supported on one class's rows, l_true
// exactly rank one with Frobenius norm equal to ||D x_true||_F.
struct SyntheticProblem {
    GroupedDictionary dict;
    DenseMatrix y;
    DenseMatrix x_true;
    DenseMatrix l_true;
    std::size_t active_class = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline SyntheticProblem generate_synthetic_impl(std::uint64_t seed, std::size_t d,
                                                std::size_t per_class_atoms, std::size_t k,
                                                std::size_t tau, double noise_sigma,
                                                bool force_class, std::size_t forced) {
    if (d == 0 || per_class_atoms == 0 || k == 0 || tau == 0)
        throw InvalidConfig("generate_synthetic: all dimensions must be positive");
    if (!(noise_sigma >= 0.0))
        throw InvalidConfig("generate_synthetic: noise_sigma must be >= 0");
    if (force_class && forced >= k)
        throw InvalidConfig("generate_synthetic: active class out of range");

    Rng rng(seed);
    const std::size_t n = per_class_atoms * k;

    DenseMatrix atoms(d, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < d; ++i) atoms(i, j) = rng.normal();

    std::vector<std::string> labels(k);
    for (std::size_t c = 0; c < k; ++c) labels[c] = "class" + std::to_string(c);
    GroupedDictionary dict(std::move(atoms),
                           GroupPartition::contiguous(std::vector<std::size_t>(k, per_class_atoms)),
                           std::move(labels));

    const std::size_t active = force_class ? forced : rng.index(k);

    // Per column: a random subset of the active class's atoms (at least 25%)
    // with Gaussian coefficients.
    DenseMatrix x_true(n, tau);
    const std::size_t min_active =
        std::max<std::size_t>(1, (per_class_atoms + 3) / 4);  // ceil(0.25 * m)
    for (std::size_t j = 0; j < tau; ++j) {
        const std::size_t count =
            min_active + rng.index(per_class_atoms - min_active + 1);
        std::vector<std::size_t> local(per_class_atoms);
        for (std::size_t i = 0; i < per_class_atoms; ++i) local[i] = i;
        rng.shuffle(local);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t row = dict.partition().group(active)[local[i]];
            x_true(row, j) = rng.normal();
        }
    }

    const DenseMatrix dx = matmul(dict.atoms(), x_true);
    const double dx_norm = frobenius_norm(dx);

    // Rank-one l_true scaled to match the sparse component's energy.
    std::vector<double> u(d), v(tau);
    for (double& val : u) val = rng.normal();
    for (double& val : v) val = rng.normal();
    DenseMatrix l_true(d, tau);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < tau; ++j) l_true(i, j) = u[i] * v[j];
    const double l_norm = frobenius_norm(l_true);
    if (l_norm > 0.0 && dx_norm > 0.0) l_true *= dx_norm / l_norm;

    DenseMatrix y = dx + l_true;
    if (noise_sigma > 0.0)
        for (double& val : y.data()) val += noise_sigma * rng.normal();

    return SyntheticProblem{std::move(dict), std::move(y), std::move(x_true),
                            std::move(l_true), active, seed};
}

}  // namespace detail

inline SyntheticProblem generate_synthetic(std::uint64_t seed, std::size_t d,
                                           std::size_t per_class_atoms, std::size_t k,
                                           std::size_t tau, double noise_sigma) {
    return detail::generate_synthetic_impl(seed, d, per_class_atoms, k, tau, noise_sigma,
                                           false, 0);
}

// Variant with a caller-chosen active class; used by benchmark harnesses to
// produce class-balanced test sets.
inline SyntheticProblem generate_synthetic_for_class(std::uint64_t seed, std::size_t d,
                                                     std::size_t per_class_atoms,
                                                     std::size_t k, std::size_t tau,
                                                     double noise_sigma,
                                                     std::size_t active_class) {
    return detail::generate_synthetic_impl(seed, d, per_class_atoms, k, tau, noise_sigma,
                                           true, active_class);
}

// ---------------------------------------------------------------------------
// Dictionary caching: CSV matrix plus a sidecar text manifest carrying the
// class partition (labels with contiguous column ranges) and tau values.
// ---------------------------------------------------------------------------

struct DictionaryManifest {
    std::vector<std::string> labels;
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> counts;
    std::size_t tau_trn = 0;  // 0 = not applicable
    std::size_t tau_tst = 0;
};

inline void write_manifest(const DictionaryManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("write_manifest: cannot open " + path);
    out << "classes " << m.labels.size() << "\n";
    for (std::size_t c = 0; c < m.labels.size(); ++c)
        out << "group " << m.labels[c] << " " << m.offsets[c] << " " << m.counts[c] << "\n";
    out << "tau_trn " << m.tau_trn << "\n";
    out << "tau_tst " << m.tau_tst << "\n";
}

inline DictionaryManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("read_manifest: cannot open " + path);
    DictionaryManifest m;
    std::string line;
    std::size_t declared = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key.empty() || key[0] == '#') continue;
        if (key == "classes") {
            ls >> declared;
        } else if (key == "group") {
            std::string label;
            std::size_t offset = 0, count = 0;
            if (!(ls >> label >> offset >> count))
                throw InvalidInput("read_manifest: malformed group line: " + line);
            m.labels.push_back(label);
            m.offsets.push_back(offset);
            m.counts.push_back(count);
        } else if (key == "tau_trn") {
            ls >> m.tau_trn;
        } else if (key == "tau_tst") {
            ls >> m.tau_tst;
        } else {
            throw InvalidInput("read_manifest: unknown key '" + key + "'");
        }
    }
    if (m.labels.empty() || (declared != 0 && declared != m.labels.size()))
        throw InvalidInput("read_manifest: class count mismatch in " + path);
    return m;
}

inline void save_dictionary(const GroupedDictionary& dict, const std::string& csv_path,
                            const std::string& manifest_path, std::size_t tau_trn = 0,
                            std::size_t tau_tst = 0) {
    write_csv(dict.atoms(), csv_path);
    DictionaryManifest m;
    m.labels = dict.labels();
    m.tau_trn = tau_trn;
    m.tau_tst = tau_tst;
    for (std::size_t c = 0; c < dict.class_count(); ++c) {
        const auto& g = dict.partition().group(c);
        // Persisted partitions are contiguous ranges.
        for (std::size_t i = 1; i < g.size(); ++i)
            if (g[i] != g[i - 1] + 1)
                throw InvalidInput("save_dictionary: non-contiguous group cannot be persisted");
        m.offsets.push_back(g.front());
        m.counts.push_back(g.size());
    }
    write_manifest(m, manifest_path);
}

inline GroupedDictionary load_dictionary(const std::string& csv_path,
                                         const std::string& manifest_path) {
    DenseMatrix atoms = read_csv_file(csv_path);
    const DictionaryManifest m = read_manifest(manifest_path);
    const std::size_t n = atoms.cols();
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < m.labels.size(); ++c) {
        std::vector<std::size_t> g(m.counts[c]);
        for (std::size_t i = 0; i < m.counts[c]; ++i) g[i] = m.offsets[c] + i;
        groups.push_back(std::move(g));
    }
    return GroupedDictionary(std::move(atoms), GroupPartition(n, std::move(groups)), m.labels);
}

}  // namespace slr
