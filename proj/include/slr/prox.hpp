#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "slr/errors.hpp"
#include "slr/matrix.hpp"
#include "slr/svd.hpp"

namespace slr {

// Non-overlapping partition of the row indices {0..n-1} into K groups.
class GroupPartition {
public:
    GroupPartition(std::size_t n, std::vector<std::vector<std::size_t>> groups)
        : n_(n), groups_(std::move(groups)) {
        if (n_ == 0 || groups_.empty())
            throw InvalidInput("GroupPartition: need n >= 1 and K >= 1");
        std::vector<bool> seen(n_, false);
        std::size_t covered = 0;
        for (const auto& g : groups_) {
            if (g.empty()) throw InvalidInput("GroupPartition: empty group");
            for (std::size_t idx : g) {
                if (idx >= n_) throw InvalidInput("GroupPartition: index out of range");
                if (seen[idx]) throw InvalidInput("GroupPartition: groups overlap");
                seen[idx] = true;
                ++covered;
            }
        }
        if (covered != n_)
            throw InvalidInput("GroupPartition: groups do not cover {0..n-1}");
    }

    // K contiguous groups of the given sizes, in order.
    static GroupPartition contiguous(const std::vector<std::size_t>& sizes) {
        std::vector<std::vector<std::size_t>> groups;
        std::size_t next = 0;
        for (std::size_t s : sizes) {
            std::vector<std::size_t> g(s);
            for (std::size_t i = 0; i < s; ++i) g[i] = next + i;
            next += s;
            groups.push_back(std::move(g));
        }
        return GroupPartition(next, std::move(groups));
    }

    static GroupPartition singletons(std::size_t n) {
        return contiguous(std::vector<std::size_t>(n, 1));
    }

    std::size_t n() const { return n_; }
    std::size_t group_count() const { return groups_.size(); }
    const std::vector<std::size_t>& group(std::size_t c) const { return groups_[c]; }
    const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }

private:
    std::size_t n_;
    std::vector<std::vector<std::size_t>> groups_;
};

// Elementwise soft thresholding: x -> sign(x) * max(|x| - t, 0).
// Prox of t*||.||_1.
inline DenseMatrix soft_threshold(const DenseMatrix& m, double t) {
    if (!(t >= 0.0)) throw InvalidInput("soft_threshold: t must be >= 0");
    require_finite(m, "soft_threshold");
    DenseMatrix out = m;
    if (t == 0.0) return out;
    for (double& v : out.data()) {
        const double mag = std::fabs(v) - t;
        v = mag > 0.0 ? (v < 0.0 ? -mag : mag) : 0.0;
    }
    return out;
}

// Blockwise Frobenius shrinkage on row groups: V -> V * max(1 - t/||V||_F, 0).
// Prox of t * sum_G ||X^[G]||_F.
inline DenseMatrix group_shrink(const DenseMatrix& m, const GroupPartition& partition,
                                double t) {
    if (!(t >= 0.0)) throw InvalidInput("group_shrink: t must be >= 0");
    require_finite(m, "group_shrink");
    if (partition.n() != m.rows())
        throw DimensionMismatch("group_shrink: partition over " +
                                std::to_string(partition.n()) + " rows, matrix has " +
                                std::to_string(m.rows()));
    DenseMatrix out = m;
    if (t == 0.0) return out;
    for (const auto& g : partition.groups()) {
        double norm_sq = 0.0;
        for (std::size_t i : g)
            for (std::size_t j = 0; j < m.cols(); ++j) norm_sq += m(i, j) * m(i, j);
        const double nrm = std::sqrt(norm_sq);
        const double scale = (nrm > t) ? (1.0 - t / nrm) : 0.0;
        for (std::size_t i : g)
            for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = scale * m(i, j);
    }
    return out;
}

// Prox of the two-level penalty t1*||X||_1 + tg*sum_G ||X^[G]||_F, which is
// the composition: elementwise shrink first, group shrink second. The order
// is part of the contract; swapping the stages computes a different operator.
inline DenseMatrix hierarchical_prox(const DenseMatrix& m, const GroupPartition& partition,
                                     double t1, double tg) {
    return group_shrink(soft_threshold(m, t1), partition, tg);
}

// Prox of t*||.||_* — soft-threshold the singular values, reconstruct.
inline DenseMatrix singular_value_threshold(const DenseMatrix& m, double t) {
    if (!(t >= 0.0)) throw InvalidInput("singular_value_threshold: t must be >= 0");
    SvdFactors f = svd_thin(m);
    for (double& s : f.sigma) s = std::max(s - t, 0.0);
    return f.reconstruct();
}

}  // namespace slr
