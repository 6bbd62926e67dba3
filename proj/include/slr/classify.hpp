#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slr/dictionary.hpp"
#include "slr/errors.hpp"
#include "slr/matrix.hpp"
#include "slr/solvers.hpp"
#include "slr/svd.hpp"

namespace slr {

struct ClassificationReport {
    std::vector<double> residuals;  // one per class
    std::size_t predicted = 0;      // argmin residual, ties to the lowest index
    double margin = 0.0;            // second-best residual minus best
};

namespace detail {

inline ClassificationReport report_from_residuals(std::vector<double> residuals) {
    ClassificationReport report;
    report.residuals = std::move(residuals);
    report.predicted = 0;
    for (std::size_t c = 1; c < report.residuals.size(); ++c)
        if (report.residuals[c] < report.residuals[report.predicted]) report.predicted = c;
    if (report.residuals.size() > 1) {
        double second = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < report.residuals.size(); ++c)
            if (c != report.predicted) second = std::min(second, report.residuals[c]);
        report.margin = second - report.residuals[report.predicted];
    }
    return report;
}

}  // namespace detail

// Minimal-residual rule on a decomposition: for each class c, keep only that
// class's columns of D and rows of X and measure ||Y - D_[Gc] X^[Gc] - L||_F.
inline ClassificationReport residual_classify(const DenseMatrix& y,
                                              const GroupedDictionary& dict,
                                              const DecompositionResult& result) {
    if (y.rows() != dict.dim() || result.l.rows() != y.rows() ||
        result.l.cols() != y.cols() || result.x.rows() != dict.atom_count() ||
        result.x.cols() != y.cols())
        throw DimensionMismatch("residual_classify: inconsistent shapes");

    const DenseMatrix base = y - result.l;
    std::vector<double> residuals(dict.class_count());
    for (std::size_t c = 0; c < dict.class_count(); ++c) {
        DenseMatrix r = base;
        for (std::size_t col_idx : dict.partition().group(c)) {
            for (std::size_t j = 0; j < y.cols(); ++j) {
                const double xij = result.x(col_idx, j);
                if (xij == 0.0) continue;
                for (std::size_t i = 0; i < y.rows(); ++i)
                    r(i, j) -= dict.atoms()(i, col_idx) * xij;
            }
        }
        residuals[c] = frobenius_norm(r);
    }
    return detail::report_from_residuals(std::move(residuals));
}

// SRC baseline on a single (neutral-subtracted) vector: code y over the full
// dictionary with OMP, then compare per-class reconstructions.
inline ClassificationReport src_classify(const std::vector<double>& y,
                                         const GroupedDictionary& dict,
                                         std::size_t sparsity) {
    if (y.size() != dict.dim())
        throw DimensionMismatch("src_classify: signal length vs dictionary dimension");
    const OmpResult code = omp(y, dict.atoms(), sparsity);

    std::vector<double> x(dict.atom_count(), 0.0);
    for (std::size_t k = 0; k < code.support.size(); ++k)
        x[code.support[k]] = code.coeffs[k];

    std::vector<double> residuals(dict.class_count());
    for (std::size_t c = 0; c < dict.class_count(); ++c) {
        std::vector<double> r = y;
        for (std::size_t col_idx : dict.partition().group(c)) {
            const double xj = x[col_idx];
            if (xj == 0.0) continue;
            for (std::size_t i = 0; i < y.size(); ++i)
                r[i] -= dict.atoms()(i, col_idx) * xj;
        }
        residuals[c] = norm2(r);
    }
    return detail::report_from_residuals(std::move(residuals));
}

// ---------------------------------------------------------------------------
// Eigenface baselines
// ---------------------------------------------------------------------------

enum class EigenfaceMode { nearest_neighbor, nearest_subspace };

class EigenfaceModel {
public:
    // Fits a mean-centered principal component basis to the training columns.
    EigenfaceModel(const DenseMatrix& train, const std::vector<std::size_t>& labels,
                   std::size_t class_count, std::size_t k_components)
        : class_count_(class_count) {
        if (labels.size() != train.cols())
            throw DimensionMismatch("EigenfaceModel: one label per training column");
        if (k_components == 0 || k_components > std::min(train.rows(), train.cols()))
            throw InvalidInput("EigenfaceModel: k_components must be in [1, min(d, #train)]");
        for (std::size_t lbl : labels)
            if (lbl >= class_count) throw InvalidInput("EigenfaceModel: label out of range");

        mean_.assign(train.rows(), 0.0);
        for (std::size_t i = 0; i < train.rows(); ++i) {
            for (std::size_t j = 0; j < train.cols(); ++j) mean_[i] += train(i, j);
            mean_[i] /= static_cast<double>(train.cols());
        }
        DenseMatrix centered = train;
        for (std::size_t i = 0; i < train.rows(); ++i)
            for (std::size_t j = 0; j < train.cols(); ++j) centered(i, j) -= mean_[i];

        const SvdFactors f = svd_thin(centered);
        basis_ = DenseMatrix(train.rows(), k_components);
        for (std::size_t i = 0; i < train.rows(); ++i)
            for (std::size_t j = 0; j < k_components; ++j) basis_(i, j) = f.u(i, j);

        labels_ = labels;
        train_proj_ = project_columns(centered);
    }

    const DenseMatrix& basis() const { return basis_; }
    const std::vector<double>& mean() const { return mean_; }
    std::size_t components() const { return basis_.cols(); }

    std::vector<double> project(const std::vector<double>& y) const {
        if (y.size() != basis_.rows())
            throw DimensionMismatch("EigenfaceModel: sample dimension mismatch");
        std::vector<double> z(basis_.cols(), 0.0);
        for (std::size_t i = 0; i < basis_.rows(); ++i) {
            const double centered = y[i] - mean_[i];
            for (std::size_t j = 0; j < basis_.cols(); ++j)
                z[j] += basis_(i, j) * centered;
        }
        return z;
    }

    ClassificationReport classify(const std::vector<double>& y, EigenfaceMode mode) const {
        const std::vector<double> z = project(y);
        std::vector<double> residuals(class_count_,
                                      std::numeric_limits<double>::infinity());
        if (mode == EigenfaceMode::nearest_neighbor) {
            for (std::size_t j = 0; j < train_proj_.cols(); ++j) {
                double dist_sq = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i) {
                    const double diff = z[i] - train_proj_(i, j);
                    dist_sq += diff * diff;
                }
                residuals[labels_[j]] = std::min(residuals[labels_[j]], std::sqrt(dist_sq));
            }
            for (double r : residuals)
                if (!std::isfinite(r)) throw InvalidInput("EigenfaceModel: class without samples");
        } else {
            for (std::size_t c = 0; c < class_count_; ++c)
                residuals[c] = subspace_residual(z, c);
        }
        return detail::report_from_residuals(std::move(residuals));
    }

private:
    DenseMatrix project_columns(const DenseMatrix& centered) const {
        return matmul_at_b(basis_, centered);
    }

    // Least-squares residual of z against the span of class c's projected
    // training vectors (min-norm solve through the thin SVD).
    double subspace_residual(const std::vector<double>& z, std::size_t c) const {
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < labels_.size(); ++j)
            if (labels_[j] == c) members.push_back(j);
        if (members.empty()) throw InvalidInput("EigenfaceModel: class without samples");

        DenseMatrix p(train_proj_.rows(), members.size());
        for (std::size_t j = 0; j < members.size(); ++j)
            for (std::size_t i = 0; i < train_proj_.rows(); ++i)
                p(i, j) = train_proj_(i, members[j]);

        const SvdFactors f = svd_thin(p);
        // Projection of z onto range(P): sum over nonzero sigma of (u_k' z) u_k.
        std::vector<double> r = z;
        for (std::size_t k = 0; k < f.sigma.size(); ++k) {
            if (f.sigma[k] == 0.0) continue;
            double coeff = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) coeff += f.u(i, k) * z[i];
            for (std::size_t i = 0; i < z.size(); ++i) r[i] -= coeff * f.u(i, k);
        }
        return norm2(r);
    }

    std::size_t class_count_;
    std::vector<double> mean_;
    DenseMatrix basis_;
    DenseMatrix train_proj_;  // k x N
    std::vector<std::size_t> labels_;
};

inline EigenfaceModel eigenface_fit(const DenseMatrix& train,
                                    const std::vector<std::size_t>& labels,
                                    std::size_t class_count, std::size_t k_components) {
    return EigenfaceModel(train, labels, class_count, k_components);
}

// ---------------------------------------------------------------------------
// Confusion matrix and run aggregation
// ---------------------------------------------------------------------------

class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<std::string> labels)
        : labels_(std::move(labels)),
          counts_(labels_.size(), std::vector<long>(labels_.size(), 0)) {
        if (labels_.empty()) throw InvalidInput("ConfusionMatrix: need at least one class");
    }

    void add(std::size_t truth, std::size_t predicted) {
        if (truth >= labels_.size() || predicted >= labels_.size())
            throw InvalidInput("ConfusionMatrix: class index out of range");
        ++counts_[truth][predicted];
        ++total_;
        if (truth == predicted) ++correct_;
    }

    std::size_t class_count() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    long count(std::size_t truth, std::size_t predicted) const {
        return counts_[truth][predicted];
    }
    long total() const { return total_; }

    long row_sum(std::size_t truth) const {
        long s = 0;
        for (long v : counts_[truth]) s += v;
        return s;
    }

    // Per-class true positive rate (diagonal of the row-normalized matrix).
    double sensitivity(std::size_t c) const {
        const long rs = row_sum(c);
        return rs > 0 ? static_cast<double>(counts_[c][c]) / static_cast<double>(rs) : 0.0;
    }

    double total_rate() const {
        return total_ > 0 ? static_cast<double>(correct_) / static_cast<double>(total_) : 0.0;
    }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        if (o.labels_.size() != labels_.size())
            throw DimensionMismatch("ConfusionMatrix: class count mismatch");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = 0; j < labels_.size(); ++j) counts_[i][j] += o.counts_[i][j];
        total_ += o.total_;
        correct_ += o.correct_;
        return *this;
    }

    // Plain-text table, rows = ground truth, columns = predictions; entries
    // are row-normalized rates.
    void print(std::ostream& out) const {
        std::size_t w = 5;
        for (const auto& l : labels_) w = std::max(w, l.size() + 1);
        out << std::setw(static_cast<int>(w)) << "";
        for (const auto& l : labels_) out << std::setw(static_cast<int>(w)) << l;
        out << "\n";
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            out << std::setw(static_cast<int>(w)) << labels_[i];
            const long rs = row_sum(i);
            for (std::size_t j = 0; j < labels_.size(); ++j) {
                char buf[16];
                const double rate =
                    rs > 0 ? static_cast<double>(counts_[i][j]) / static_cast<double>(rs) : 0.0;
                std::snprintf(buf, sizeof(buf), "%.2f", rate);
                out << std::setw(static_cast<int>(w)) << buf;
            }
            out << "\n";
        }
    }

    // Machine-readable counts: header with predicted labels, one row per
    // ground-truth class.
    void write_csv(std::ostream& out) const {
        out << "truth\\pred";
        for (const auto& l : labels_) out << "," << l;
        out << "\n";
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            out << labels_[i];
            for (std::size_t j = 0; j < labels_.size(); ++j) out << "," << counts_[i][j];
            out << "\n";
        }
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<long>> counts_;
    long total_ = 0;
    long correct_ = 0;
};

inline ConfusionMatrix accumulate_confusion(
    const std::vector<std::pair<std::size_t, ClassificationReport>>& reports,
    std::vector<std::string> labels) {
    ConfusionMatrix cm(std::move(labels));
    for (const auto& [truth, report] : reports) cm.add(truth, report.predicted);
    return cm;
}

// Aggregate over repeated splits: pooled counts plus mean and sample standard
// deviation of the per-run total recognition rate (Welford accumulation).
class RunAggregate {
public:
    explicit RunAggregate(std::vector<std::string> labels) : pooled_(std::move(labels)) {}

    void add_run(const ConfusionMatrix& run) {
        pooled_ += run;
        const double rate = run.total_rate();
        run_rates_.push_back(rate);
        const double delta = rate - mean_;
        mean_ += delta / static_cast<double>(run_rates_.size());
        m2_ += delta * (rate - mean_);
    }

    std::size_t runs() const { return run_rates_.size(); }
    const std::vector<double>& run_rates() const { return run_rates_; }
    const ConfusionMatrix& pooled() const { return pooled_; }
    double mean_rate() const { return mean_; }

    double std_rate() const {
        if (run_rates_.size() < 2) return 0.0;
        return std::sqrt(m2_ / static_cast<double>(run_rates_.size() - 1));
    }

private:
    ConfusionMatrix pooled_;
    std::vector<double> run_rates_;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace slr
