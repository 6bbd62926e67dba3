#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "slr/errors.hpp"
#include "slr/matrix.hpp"

namespace slr {

// Thin SVD factors of a d x tau matrix: m = u * diag(sigma) * vt with
// r = min(d, tau), u column-orthonormal (d x r), vt row-orthonormal (r x tau),
// sigma nonnegative and sorted nonincreasing.
struct SvdFactors {
    DenseMatrix u;
    std::vector<double> sigma;
    DenseMatrix vt;

    DenseMatrix reconstruct() const {
        DenseMatrix us = u;
        for (std::size_t i = 0; i < us.rows(); ++i)
            for (std::size_t j = 0; j < sigma.size(); ++j)
                us(i, j) *= sigma[j];
        return matmul(us, vt);
    }
};

namespace detail {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns eigenvalues
// in `evals` and orthonormal eigenvectors as columns of `evecs`, sorted by
// nonincreasing eigenvalue. Deterministic: fixed sweep order, fixed stopping
// rule. Intended for the small Gram matrices this library produces.
inline void jacobi_eigh_symmetric(DenseMatrix a, std::vector<double>& evals,
                                  DenseMatrix& evecs) {
    const std::size_t n = a.rows();
    evecs = DenseMatrix::identity(n);
    if (n == 1) {
        evals.assign(1, a(0, 0));
        return;
    }

    const double total = frobenius_norm(a);
    const double stop = 1e-15 * (total > 0 ? total : 1.0);
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                // Smaller-angle rotation root; stable for large |theta|.
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = evecs(k, p), vkq = evecs(k, q);
                    evecs(k, p) = c * vkp - s * vkq;
                    evecs(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    evals.resize(n);
    for (std::size_t i = 0; i < n; ++i) evals[i] = a(i, i);

    // Sort nonincreasing, reordering eigenvector columns to match.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return evals[x] > evals[y]; });
    std::vector<double> sorted_vals(n);
    DenseMatrix sorted_vecs(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        sorted_vals[j] = evals[order[j]];
        for (std::size_t i = 0; i < n; ++i) sorted_vecs(i, j) = evecs(i, order[j]);
    }
    evals = std::move(sorted_vals);
    evecs = std::move(sorted_vecs);
}

// Two-pass modified Gram-Schmidt on the listed columns of `m` (in order).
// Columns whose remainder collapses below `drop_tol` are reported back so the
// caller can treat the matching singular value as zero.
inline void orthonormalize_columns(DenseMatrix& m, const std::vector<std::size_t>& cols,
                                   double drop_tol, std::vector<bool>& dropped) {
    const std::size_t d = m.rows();
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
        const std::size_t j = cols[idx];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < idx; ++prev) {
                const std::size_t pj = cols[prev];
                if (dropped[pj]) continue;
                double proj = 0.0;
                for (std::size_t i = 0; i < d; ++i) proj += m(i, j) * m(i, pj);
                for (std::size_t i = 0; i < d; ++i) m(i, j) -= proj * m(i, pj);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < d; ++i) nrm += m(i, j) * m(i, j);
        nrm = std::sqrt(nrm);
        if (nrm < drop_tol) {
            dropped[j] = true;
            for (std::size_t i = 0; i < d; ++i) m(i, j) = 0.0;
        } else {
            for (std::size_t i = 0; i < d; ++i) m(i, j) /= nrm;
        }
    }
}

// Fills column `j` of `m` with a unit vector orthogonal to all columns in
// `established`. Tries canonical basis vectors in order.
inline void complete_basis_column(DenseMatrix& m, std::size_t j,
                                  const std::vector<std::size_t>& established) {
    const std::size_t d = m.rows();
    for (std::size_t e = 0; e < d; ++e) {
        std::vector<double> v(d, 0.0);
        v[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t pj : established) {
                double proj = 0.0;
                for (std::size_t i = 0; i < d; ++i) proj += v[i] * m(i, pj);
                for (std::size_t i = 0; i < d; ++i) v[i] -= proj * m(i, pj);
            }
        }
        double nrm = norm2(v);
        if (nrm > 0.1) {
            for (std::size_t i = 0; i < d; ++i) m(i, j) = v[i] / nrm;
            return;
        }
    }
    throw InvalidInput("svd_thin: failed to complete orthonormal basis");
}

}  // namespace detail

// Thin SVD via symmetric eigendecomposition of the Gram matrix on the smaller
// side (O(d*tau^2) for the tall matrices this library works with), then
// recovery of the other factor by projection. Singular values that the Gram
// route cannot certify (below the 1e-12 division guard, or whose projected
// column norm disagrees with sigma, the signature of squared-away precision)
// are treated as exact zeros and their singular vectors completed to an
// orthonormal basis. Deterministic for fixed input.
inline SvdFactors svd_thin(const DenseMatrix& m) {
    require_finite(m, "svd_thin");
    const std::size_t d = m.rows(), tau = m.cols();
    const std::size_t r = std::min(d, tau);
    const bool tall = tau <= d;

    // Gram on the smaller side.
    const DenseMatrix gram = tall ? matmul_at_b(m, m) : matmul_at_b(m.transpose(), m.transpose());

    std::vector<double> evals;
    DenseMatrix evecs;
    detail::jacobi_eigh_symmetric(gram, evals, evecs);

    std::vector<double> sigma(r);
    for (std::size_t i = 0; i < r; ++i) sigma[i] = std::sqrt(std::max(evals[i], 0.0));
    const double smax = sigma.empty() ? 0.0 : sigma[0];
    const double guard = 1e-12 * smax;

    // evecs holds the small-side factor; `other` is recovered as m*v / sigma.
    DenseMatrix other(tall ? d : tau, r);
    std::vector<bool> zeroed(r, false);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < r; ++i) {
        if (sigma[i] <= guard) {
            zeroed[i] = true;
            sigma[i] = 0.0;
            continue;
        }
        std::vector<double> w(other.rows(), 0.0);
        if (tall) {
            // w = m * v_i
            for (std::size_t row = 0; row < d; ++row) {
                double acc = 0.0;
                for (std::size_t k = 0; k < tau; ++k) acc += m(row, k) * evecs(k, i);
                w[row] = acc;
            }
        } else {
            // w = m^T * u_i
            for (std::size_t col = 0; col < tau; ++col) {
                double acc = 0.0;
                for (std::size_t k = 0; k < d; ++k) acc += m(k, col) * evecs(k, i);
                w[col] = acc;
            }
        }
        const double nrm = norm2(w);
        // Gram squaring floors resolvable singular values near sqrt(eps)*smax;
        // spurious ones show up as |w| inconsistent with sigma.
        if (nrm <= guard || std::fabs(nrm / sigma[i] - 1.0) > 1e-3) {
            zeroed[i] = true;
            sigma[i] = 0.0;
            continue;
        }
        for (std::size_t row = 0; row < other.rows(); ++row) other(row, i) = w[row] / nrm;
        kept.push_back(i);
    }

    // Restore orthonormality lost to ill-conditioned projections, then fill
    // the zeroed directions with an orthonormal complement.
    std::vector<bool> dropped(r, false);
    detail::orthonormalize_columns(other, kept, 1e-8, dropped);
    for (std::size_t i : kept) {
        if (dropped[i]) {
            zeroed[i] = true;
            sigma[i] = 0.0;
        }
    }
    std::vector<std::size_t> established;
    for (std::size_t i = 0; i < r; ++i)
        if (!zeroed[i]) established.push_back(i);
    for (std::size_t i = 0; i < r; ++i) {
        if (!zeroed[i]) continue;
        detail::complete_basis_column(other, i, established);
        established.push_back(i);
    }

    SvdFactors f;
    f.sigma = std::move(sigma);
    if (tall) {
        f.u = std::move(other);
        // vt rows = eigenvector columns (first r of them).
        f.vt = DenseMatrix(r, tau);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < tau; ++j) f.vt(i, j) = evecs(j, i);
    } else {
        f.u = DenseMatrix(d, r);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < r; ++j) f.u(i, j) = evecs(i, j);
        f.vt = other.transpose();
    }
    return f;
}

enum class NormKind { entrywise_l1, frobenius, nuclear, spectral };

inline double norm(const DenseMatrix& m, NormKind kind) {
    require_finite(m, "norm");
    switch (kind) {
        case NormKind::entrywise_l1:
            return entrywise_l1_norm(m);
        case NormKind::frobenius:
            return frobenius_norm(m);
        case NormKind::nuclear: {
            const SvdFactors f = svd_thin(m);
            double s = 0.0;
            for (double v : f.sigma) s += v;
            return s;
        }
        case NormKind::spectral: {
            const SvdFactors f = svd_thin(m);
            return f.sigma.empty() ? 0.0 : f.sigma[0];
        }
    }
    throw InvalidInput("norm: unknown kind");
}

inline double nuclear_norm(const DenseMatrix& m) { return norm(m, NormKind::nuclear); }
inline double spectral_norm(const DenseMatrix& m) { return norm(m, NormKind::spectral); }

// Numerical rank: number of singular values above rel_tol * sigma_max.
inline std::size_t numerical_rank(const DenseMatrix& m, double rel_tol = 1e-9) {
    const SvdFactors f = svd_thin(m);
    if (f.sigma.empty() || f.sigma[0] == 0.0) return 0;
    std::size_t r = 0;
    for (double s : f.sigma)
        if (s > rel_tol * f.sigma[0]) ++r;
    return r;
}

}  // namespace slr
