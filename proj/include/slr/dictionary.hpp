#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "slr/errors.hpp"
#include "slr/matrix.hpp"
#include "slr/prox.hpp"
#include "slr/svd.hpp"

namespace slr {

// Column-stacked training dictionary with a class partition over its columns.
// Columns are unit-normalized at construction; the spectral norm is computed
// once here because every solve needs it for its step size.
class GroupedDictionary {
public:
    GroupedDictionary(DenseMatrix atoms, GroupPartition partition,
                      std::vector<std::string> labels)
        : atoms_(std::move(atoms)),
          partition_(std::move(partition)),
          labels_(std::move(labels)) {
        require_finite(atoms_, "GroupedDictionary");
        if (partition_.n() != atoms_.cols())
            throw DimensionMismatch("GroupedDictionary: partition over " +
                                    std::to_string(partition_.n()) +
                                    " columns, atoms have " + std::to_string(atoms_.cols()));
        if (labels_.size() != partition_.group_count())
            throw DimensionMismatch("GroupedDictionary: " + std::to_string(labels_.size()) +
                                    " labels for " + std::to_string(partition_.group_count()) +
                                    " groups");
        normalize_columns();
        spectral_norm_ = spectral_norm(atoms_);
    }

    std::size_t dim() const { return atoms_.rows(); }
    std::size_t atom_count() const { return atoms_.cols(); }
    std::size_t class_count() const { return partition_.group_count(); }

    const DenseMatrix& atoms() const { return atoms_; }
    const GroupPartition& partition() const { return partition_; }
    const std::vector<std::string>& labels() const { return labels_; }
    double atoms_spectral_norm() const { return spectral_norm_; }

    // Sub-dictionary of the columns in group c (copy).
    DenseMatrix class_atoms(std::size_t c) const {
        const auto& g = partition_.group(c);
        DenseMatrix sub(atoms_.rows(), g.size());
        for (std::size_t j = 0; j < g.size(); ++j)
            for (std::size_t i = 0; i < atoms_.rows(); ++i) sub(i, j) = atoms_(i, g[j]);
        return sub;
    }

private:
    void normalize_columns() {
        for (std::size_t j = 0; j < atoms_.cols(); ++j) {
            double nrm_sq = 0.0;
            for (std::size_t i = 0; i < atoms_.rows(); ++i)
                nrm_sq += atoms_(i, j) * atoms_(i, j);
            const double nrm = std::sqrt(nrm_sq);
            if (nrm == 0.0)
                throw ZeroAtom("GroupedDictionary: column " + std::to_string(j) +
                               " is identically zero");
            for (std::size_t i = 0; i < atoms_.rows(); ++i) atoms_(i, j) /= nrm;
        }
    }

    DenseMatrix atoms_;
    GroupPartition partition_;
    std::vector<std::string> labels_;
    double spectral_norm_;
};

}  // namespace slr
