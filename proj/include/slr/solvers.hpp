#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "slr/dictionary.hpp"
#include "slr/errors.hpp"
#include "slr/matrix.hpp"
#include "slr/prox.hpp"
#include "slr/svd.hpp"

namespace slr {

// Which X-step the ADMM loop dispatched to. lambda_g == 0 selects the plain
// sparse model (Lasso X-step); lambda_g > 0 selects the group-sparse model
// (linearized prox-gradient X-step).
enum class XStepKind { slr_lasso, chislr_linearized };

inline const char* to_string(XStepKind k) {
    return k == XStepKind::slr_lasso ? "slr_lasso" : "chislr_linearized";
}

struct SolverConfig {
    double lambda_L = 10.0;   // nuclear-norm weight
    double lambda_g = 4.5;    // group weight; 0 selects the SLR x-step
    double beta = 1.0;        // augmented-Lagrangian penalty
    int max_outer_iters = 600;
    int inner_iters = 100;    // Lasso (FISTA) iterations per outer step
    int linearized_iters = 1; // prox-gradient sub-iterations per outer step
    double rel_tol = 1e-6;    // stop when ||Y-DX-L||_F / ||Y||_F falls below
    double step_scale = 1.0;  // safety factor on the linearized step size

    void validate() const {
        if (!(lambda_L >= 0.0) || !std::isfinite(lambda_L))
            throw InvalidConfig("SolverConfig: lambda_L must be finite and >= 0");
        if (!(lambda_g >= 0.0) || !std::isfinite(lambda_g))
            throw InvalidConfig("SolverConfig: lambda_g must be finite and >= 0");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw InvalidConfig("SolverConfig: beta must be finite and > 0");
        if (max_outer_iters < 1) throw InvalidConfig("SolverConfig: max_outer_iters < 1");
        if (inner_iters < 1) throw InvalidConfig("SolverConfig: inner_iters < 1");
        if (linearized_iters < 1) throw InvalidConfig("SolverConfig: linearized_iters < 1");
        if (!(rel_tol >= 0.0) || !std::isfinite(rel_tol))
            throw InvalidConfig("SolverConfig: rel_tol must be finite and >= 0");
        if (!(step_scale > 0.0) || step_scale > 1.0)
            throw InvalidConfig("SolverConfig: step_scale must be in (0, 1]");
    }
};

struct DecompositionResult {
    DenseMatrix x;  // n x tau sparse code
    DenseMatrix l;  // d x tau low-rank term
    std::vector<double> residual_history;  // ||Y-DX-L||_F / ||Y||_F per iteration
    int iterations_run = 0;
    bool converged = false;
    XStepKind x_step = XStepKind::chislr_linearized;
};

namespace detail {

inline void require_unit_columns(const DenseMatrix& d, const char* who) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
        double nrm_sq = 0.0;
        for (std::size_t i = 0; i < d.rows(); ++i) nrm_sq += d(i, j) * d(i, j);
        if (std::fabs(std::sqrt(nrm_sq) - 1.0) > 1e-6)
            throw InvalidInput(std::string(who) + ": dictionary columns must be unit-normalized");
    }
}

}  // namespace detail

// Lasso X-step: min_X ||X||_1 + (beta/2)||y_eff - D X||_F^2, each column an
// independent Lasso instance. FISTA from a zero start with the fixed step
// 1/(beta*||D||_2^2); `momentum=false` degrades to plain ISTA (used by the
// cross-checks against the linearized step).
inline DenseMatrix x_step_slr(const DenseMatrix& y_eff, const DenseMatrix& d, double beta,
                              int iters, double dict_spectral_norm = -1.0,
                              bool momentum = true) {
    if (d.rows() != y_eff.rows())
        throw DimensionMismatch("x_step_slr: dictionary rows " + std::to_string(d.rows()) +
                                " vs observation rows " + std::to_string(y_eff.rows()));
    detail::require_unit_columns(d, "x_step_slr");
    const double snorm = dict_spectral_norm >= 0.0 ? dict_spectral_norm : spectral_norm(d);
    if (snorm == 0.0) throw InvalidInput("x_step_slr: zero dictionary");

    const double lip = beta * snorm * snorm;
    const double eta = 1.0 / lip;

    // All columns share the t-schedule, so matrix-form FISTA is exactly
    // per-column FISTA.
    DenseMatrix x(d.cols(), y_eff.cols());
    DenseMatrix z = x;
    double t = 1.0;
    for (int it = 0; it < iters; ++it) {
        DenseMatrix grad = matmul_at_b(d, matmul(d, z) - y_eff);  // (1/beta)*grad
        grad *= beta;
        DenseMatrix x_new = soft_threshold(z - eta * grad, eta);
        if (momentum) {
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            z = x_new + ((t - 1.0) / t_new) * (x_new - x);
            t = t_new;
        } else {
            z = x_new;
        }
        x = std::move(x_new);
    }
    return x;
}

// Group-hierarchical X-step: prox-gradient (ISTA) iterations on
//   ||X||_1 + lambda_g * sum_G ||X^[G]||_F + (beta/2)||y_eff - D X||_F^2
// linearizing the smooth term at the current iterate, warm-started at the
// previous outer X. Step eta = step_scale / (beta*||D||_2^2); each gradient
// step is followed by the exact prox of the compound penalty.
inline DenseMatrix x_step_chislr(const DenseMatrix& y_eff, const GroupedDictionary& dict,
                                 double beta, double lambda_g, int iters, double step_scale,
                                 const DenseMatrix& warm_start) {
    const DenseMatrix& d = dict.atoms();
    if (d.rows() != y_eff.rows())
        throw DimensionMismatch("x_step_chislr: dictionary rows " + std::to_string(d.rows()) +
                                " vs observation rows " + std::to_string(y_eff.rows()));
    if (warm_start.rows() != d.cols() || warm_start.cols() != y_eff.cols())
        throw DimensionMismatch("x_step_chislr: warm start shape mismatch");
    const double snorm = dict.atoms_spectral_norm();
    if (snorm == 0.0) throw InvalidInput("x_step_chislr: zero dictionary");

    const double eta = step_scale / (beta * snorm * snorm);
    DenseMatrix x = warm_start;
    for (int it = 0; it < iters; ++it) {
        DenseMatrix grad = matmul_at_b(d, matmul(d, x) - y_eff);
        grad *= beta;
        x = hierarchical_prox(x - eta * grad, dict.partition(), eta, eta * lambda_g);
    }
    return x;
}

// One full ADMM update (L-step, X-step, multiplier step) for
//   min f(X) + lambda_L ||L||_*  s.t.  Y = D X + L.
// Exposed separately so the update equations are testable in isolation.
struct AdmmState {
    DenseMatrix x;       // n x tau
    DenseMatrix l;       // d x tau
    DenseMatrix lambda;  // d x tau multipliers
};

inline void admm_step(AdmmState& s, const DenseMatrix& y, const GroupedDictionary& dict,
                      const SolverConfig& cfg) {
    const double beta = cfg.beta;
    // L-step: closed form, shrink the singular values of Y - D X_k + Lambda_k/beta.
    s.l = singular_value_threshold(y - matmul(dict.atoms(), s.x) + (1.0 / beta) * s.lambda,
                                   cfg.lambda_L / beta);
    // X-step on Y_eff = Y - L_{k+1} + Lambda_k/beta.
    const DenseMatrix y_eff = y - s.l + (1.0 / beta) * s.lambda;
    if (cfg.lambda_g == 0.0) {
        s.x = x_step_slr(y_eff, dict.atoms(), beta, cfg.inner_iters,
                         dict.atoms_spectral_norm());
    } else {
        s.x = x_step_chislr(y_eff, dict, beta, cfg.lambda_g, cfg.linearized_iters,
                            cfg.step_scale, s.x);
    }
    // Multiplier ascent on the constraint residual.
    s.lambda += beta * (y - matmul(dict.atoms(), s.x) - s.l);
}

// Full ADMM solve from zero initialization (X0 = L0 = Lambda0 = 0). Stops at
// the relative primal residual tolerance or the iteration cap; any NaN/Inf
// iterate aborts with the residual history attached.
inline DecompositionResult admm_solve(const DenseMatrix& y, const GroupedDictionary& dict,
                                      const SolverConfig& cfg) {
    cfg.validate();
    require_finite(y, "admm_solve");
    if (y.rows() != dict.dim())
        throw DimensionMismatch("admm_solve: observation rows " + std::to_string(y.rows()) +
                                " vs dictionary dimension " + std::to_string(dict.dim()));

    const double y_norm = frobenius_norm(y);
    const double denom = y_norm > 0.0 ? y_norm : 1.0;

    AdmmState s{DenseMatrix(dict.atom_count(), y.cols()), DenseMatrix(y.rows(), y.cols()),
                DenseMatrix(y.rows(), y.cols())};

    DecompositionResult result;
    result.x_step = cfg.lambda_g == 0.0 ? XStepKind::slr_lasso : XStepKind::chislr_linearized;

    for (int k = 0; k < cfg.max_outer_iters; ++k) {
        admm_step(s, y, dict, cfg);
        const double residual =
            frobenius_norm(y - matmul(dict.atoms(), s.x) - s.l) / denom;
        result.residual_history.push_back(residual);
        if (!std::isfinite(residual) || !s.x.is_finite() || !s.l.is_finite() ||
            !s.lambda.is_finite())
            throw NonFiniteIterate("admm_solve: non-finite iterate at iteration " +
                                       std::to_string(k + 1),
                                   result.residual_history);
        if (residual <= cfg.rel_tol) {
            result.converged = true;
            break;
        }
    }

    result.iterations_run = static_cast<int>(result.residual_history.size());
    result.x = std::move(s.x);
    result.l = std::move(s.l);
    return result;
}

// Orthogonal Matching Pursuit over unit-norm atoms: greedy pick by absolute
// correlation with the residual, least-squares refit on the support each
// step (minimum-norm via SVD, so a rank-deficient pick never fails), stop at
// `sparsity` atoms or residual below 1e-10.
struct OmpResult {
    std::vector<std::size_t> support;  // in selection order
    std::vector<double> coeffs;        // aligned with support
};

inline OmpResult omp(const std::vector<double>& y, const DenseMatrix& d,
                     std::size_t sparsity) {
    if (y.size() != d.rows())
        throw DimensionMismatch("omp: signal length " + std::to_string(y.size()) +
                                " vs atom dimension " + std::to_string(d.rows()));
    if (sparsity == 0 || sparsity > d.cols())
        throw InvalidInput("omp: sparsity must be in [1, atom count]");
    detail::require_unit_columns(d, "omp");

    const std::size_t dim = d.rows(), n = d.cols();
    OmpResult res;
    std::vector<double> residual = y;
    std::vector<bool> selected(n, false);

    while (res.support.size() < sparsity && norm2(residual) >= 1e-10) {
        // Atom with the largest |<d_j, r>|; ties go to the lowest index.
        std::size_t best = n;
        double best_corr = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (selected[j]) continue;
            double corr = 0.0;
            for (std::size_t i = 0; i < dim; ++i) corr += d(i, j) * residual[i];
            corr = std::fabs(corr);
            if (corr > best_corr) {
                best_corr = corr;
                best = j;
            }
        }
        if (best == n) break;
        selected[best] = true;
        res.support.push_back(best);

        // Min-norm least squares on the selected sub-dictionary.
        DenseMatrix sub(dim, res.support.size());
        for (std::size_t j = 0; j < res.support.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) sub(i, j) = d(i, res.support[j]);
        const SvdFactors f = svd_thin(sub);
        std::vector<double> uty(f.sigma.size(), 0.0);
        for (std::size_t k = 0; k < f.sigma.size(); ++k)
            for (std::size_t i = 0; i < dim; ++i) uty[k] += f.u(i, k) * y[i];
        res.coeffs.assign(res.support.size(), 0.0);
        for (std::size_t k = 0; k < f.sigma.size(); ++k) {
            if (f.sigma[k] == 0.0) continue;
            const double w = uty[k] / f.sigma[k];
            for (std::size_t j = 0; j < res.coeffs.size(); ++j)
                res.coeffs[j] += w * f.vt(k, j);
        }

        for (std::size_t i = 0; i < dim; ++i) {
            double fit = 0.0;
            for (std::size_t j = 0; j < res.support.size(); ++j)
                fit += d(i, res.support[j]) * res.coeffs[j];
            residual[i] = y[i] - fit;
        }
    }
    return res;
}

}  // namespace slr
