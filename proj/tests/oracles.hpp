// Independent numerical oracles for the test suite. Everything here avoids
// the library's solver/prox/svd code paths: brute-force searches, naive
// linear algebra, closed forms, and direct statistics formulas.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "slr/matrix.hpp"
#include "slr/prox.hpp"
#include "slr/random.hpp"

namespace oracle {

// Plain ijk triple loop, no blocking, no reordering.
inline slr::DenseMatrix naive_matmul(const slr::DenseMatrix& a, const slr::DenseMatrix& b) {
    slr::DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline slr::DenseMatrix random_matrix(std::uint64_t seed, std::size_t rows,
                                      std::size_t cols) {
    slr::Rng rng(seed);
    slr::DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

// Golden-section style ternary search for the minimizer of a convex 1-D
// function on [lo, hi].
inline double ternary_min(const std::function<double(double)>& f, double lo, double hi,
                          int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2))
            hi = m2;
        else
            lo = m1;
    }
    return 0.5 * (lo + hi);
}

// Minimizer of 0.5*(x - v)^2 + t*|x| by 1-D numerical search.
inline double scalar_shrink_oracle(double v, double t) {
    const double span = std::fabs(v) + t + 1.0;
    return ternary_min([&](double x) { return 0.5 * (x - v) * (x - v) + t * std::fabs(x); },
                       -span, span);
}

// Minimizer of 0.5*||X - V||_F^2 + t*||X||_F. By rotational symmetry the
// minimizer lies on the ray {alpha * V : alpha >= 0}; search over alpha.
inline slr::DenseMatrix group_norm_prox_oracle(const slr::DenseMatrix& v, double t) {
    const double vnorm = slr::frobenius_norm(v);
    if (vnorm == 0.0) return slr::DenseMatrix(v.rows(), v.cols(), 0.0);
    const double alpha = ternary_min(
        [&](double a) {
            return 0.5 * (a - 1.0) * (a - 1.0) * vnorm * vnorm + t * std::fabs(a) * vnorm;
        },
        0.0, 2.0);
    slr::DenseMatrix out = v;
    out *= alpha;
    return out;
}

// Dense grid search for the 2-D single-group case:
//   min 0.5*||x - v||^2 + t1*||x||_1 + tg*||x||_2,  x in R^2.
inline std::pair<double, double> grid2_prox_oracle(double v0, double v1, double t1,
                                                   double tg, double step = 1e-3) {
    const double span = std::max(std::fabs(v0), std::fabs(v1)) + t1 + tg + 0.1;
    double best0 = 0.0, best1 = 0.0;
    double best = 1e300;
    for (double x0 = -span; x0 <= span; x0 += step) {
        for (double x1 = -span; x1 <= span; x1 += step) {
            const double d0 = x0 - v0, d1 = x1 - v1;
            const double val = 0.5 * (d0 * d0 + d1 * d1) + t1 * (std::fabs(x0) + std::fabs(x1)) +
                               tg * std::sqrt(x0 * x0 + x1 * x1);
            if (val < best) {
                best = val;
                best0 = x0;
                best1 = x1;
            }
        }
    }
    return {best0, best1};
}

// Per-component constrained minimizer of 0.5*(s' - s)^2 + t*s' over s' >= 0.
// Combined with unitary invariance this gives the singular-value map of the
// nuclear-norm prox without using the library's shrinkage algebra.
inline double nonneg_shrink_oracle(double s, double t) {
    return std::max(
        0.0, ternary_min([&](double x) { return 0.5 * (x - s) * (x - s) + t * x; }, 0.0,
                         s + t + 1.0));
}

// Closed-form eigenvalues of a symmetric 3x3 matrix (trigonometric method),
// sorted nonincreasing.
inline std::vector<double> sym3_eigenvalues(const slr::DenseMatrix& a) {
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                      (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    if (p2 <= 0.0) return {q, q, q};
    const double p = std::sqrt(p2 / 6.0);
    // r = det((A - q I) / p) / 2, clamped into [-1, 1]
    slr::DenseMatrix b = a;
    for (int i = 0; i < 3; ++i) b(i, i) -= q;
    b *= 1.0 / p;
    const double det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                       b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                       b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    const double r = std::clamp(det / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * 3.14159265358979323846 / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::vector<double> ev{e1, e2, e3};
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

// Cyclic coordinate descent for the single-column Lasso
//   min ||x||_1 + (beta/2) * ||y - D x||_2^2
// with unit-norm dictionary columns. Exact coordinate minimization per step.
inline std::vector<double> lasso_coordinate_descent(const std::vector<double>& y,
                                                    const slr::DenseMatrix& d, double beta,
                                                    int sweeps) {
    const std::size_t dim = d.rows(), n = d.cols();
    std::vector<double> x(n, 0.0);
    std::vector<double> residual = y;  // y - D x
    for (int s = 0; s < sweeps; ++s) {
        for (std::size_t j = 0; j < n; ++j) {
            double corr = 0.0;
            for (std::size_t i = 0; i < dim; ++i) corr += d(i, j) * residual[i];
            const double rho = corr + x[j];  // unit column norm
            const double thr = 1.0 / beta;
            const double x_new =
                rho > thr ? rho - thr : (rho < -thr ? rho + thr : 0.0);
            const double delta = x_new - x[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < dim; ++i) residual[i] -= delta * d(i, j);
                x[j] = x_new;
            }
        }
    }
    return x;
}

inline double lasso_objective(const std::vector<double>& x, const std::vector<double>& y,
                              const slr::DenseMatrix& d, double beta) {
    double obj = 0.0;
    for (double v : x) obj += std::fabs(v);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < d.cols(); ++j) fit += d(i, j) * x[j];
        const double r = y[i] - fit;
        obj += 0.5 * beta * r * r;
    }
    return obj;
}

// Objective of the group-hierarchical X-step subproblem.
inline double hislr_objective(const slr::DenseMatrix& x, const slr::DenseMatrix& y_eff,
                              const slr::DenseMatrix& d, const slr::GroupPartition& part,
                              double beta, double lambda_g) {
    double obj = slr::entrywise_l1_norm(x);
    for (const auto& g : part.groups()) {
        double nsq = 0.0;
        for (std::size_t i : g)
            for (std::size_t j = 0; j < x.cols(); ++j) nsq += x(i, j) * x(i, j);
        obj += lambda_g * std::sqrt(nsq);
    }
    const slr::DenseMatrix r = y_eff - naive_matmul(d, x);
    const double rn = slr::frobenius_norm(r);
    return obj + 0.5 * beta * rn * rn;
}

// Independent prox-gradient loop for the same subproblem (plain ISTA written
// against naive primitives), run to a requested iteration count.
inline slr::DenseMatrix hislr_prox_gradient_oracle(const slr::DenseMatrix& y_eff,
                                                   const slr::DenseMatrix& d,
                                                   const slr::GroupPartition& part,
                                                   double beta, double lambda_g,
                                                   double lipschitz, int iters) {
    const double eta = 1.0 / lipschitz;
    slr::DenseMatrix x(d.cols(), y_eff.cols(), 0.0);
    for (int it = 0; it < iters; ++it) {
        const slr::DenseMatrix fit = naive_matmul(d, x);
        slr::DenseMatrix grad(d.cols(), y_eff.cols(), 0.0);
        for (std::size_t i = 0; i < d.rows(); ++i)
            for (std::size_t j = 0; j < y_eff.cols(); ++j) {
                const double r = fit(i, j) - y_eff(i, j);
                for (std::size_t k = 0; k < d.cols(); ++k) grad(k, j) += beta * d(i, k) * r;
            }
        slr::DenseMatrix w = x - eta * grad;
        // prox of eta*(||.||_1 + lambda_g * sum_G ||.||_F): entrywise shrink
        // by eta, then blockwise shrink by eta*lambda_g.
        for (double& v : w.data()) {
            const double mag = std::fabs(v) - eta;
            v = mag > 0.0 ? (v < 0.0 ? -mag : mag) : 0.0;
        }
        for (const auto& g : part.groups()) {
            double nsq = 0.0;
            for (std::size_t i : g)
                for (std::size_t j = 0; j < w.cols(); ++j) nsq += w(i, j) * w(i, j);
            const double nrm = std::sqrt(nsq);
            const double t = eta * lambda_g;
            const double scale = nrm > t ? 1.0 - t / nrm : 0.0;
            for (std::size_t i : g)
                for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) *= scale;
        }
        x = std::move(w);
    }
    return x;
}

// Direct two-pass mean / sample standard deviation.
inline std::pair<double, double> mean_std(const std::vector<double>& values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace oracle
