#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "slr/matrix.hpp"
#include "slr/svd.hpp"

using slr::DenseMatrix;
using slr::NormKind;

namespace {

double rel_fro_dist(const DenseMatrix& a, const DenseMatrix& b) {
    const double denom = std::max(slr::frobenius_norm(b), 1e-300);
    return slr::frobenius_norm(a - b) / denom;
}

void check_svd_invariants(const DenseMatrix& m, double tol = 1e-9) {
    const slr::SvdFactors f = slr::svd_thin(m);
    const std::size_t r = std::min(m.rows(), m.cols());
    REQUIRE(f.sigma.size() == r);
    for (std::size_t i = 0; i + 1 < r; ++i) REQUIRE(f.sigma[i] >= f.sigma[i + 1]);
    for (double s : f.sigma) REQUIRE(s >= 0.0);

    // u' u = I and vt vt' = I, checked with naive products.
    const DenseMatrix utu = oracle::naive_matmul(f.u.transpose(), f.u);
    const DenseMatrix vvt = oracle::naive_matmul(f.vt, f.vt.transpose());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            REQUIRE(std::fabs(utu(i, j) - expect) < tol);
            REQUIRE(std::fabs(vvt(i, j) - expect) < tol);
        }

    const double m_norm = slr::frobenius_norm(m);
    const double err = slr::frobenius_norm(f.reconstruct() - m);
    REQUIRE(err <= tol * std::max(m_norm, 1.0));
}

}  // namespace

TEST_CASE("matmul agrees with the naive triple loop", "[matrix]") {
    const DenseMatrix a = oracle::random_matrix(11, 3, 4);
    const DenseMatrix b = oracle::random_matrix(12, 4, 2);
    const DenseMatrix c = slr::matmul(a, b);
    const DenseMatrix ref = oracle::naive_matmul(a, b);
    REQUIRE(rel_fro_dist(c, ref) < 1e-12);
}

TEST_CASE("matmul identities", "[matrix]") {
    const DenseMatrix m = oracle::random_matrix(5, 4, 3);
    REQUIRE(rel_fro_dist(slr::matmul(DenseMatrix::identity(4), m), m) == 0.0);

    const DenseMatrix z(4, 4, 0.0);
    const DenseMatrix zm = slr::matmul(z, m);
    REQUIRE(slr::frobenius_norm(zm) == 0.0);

    // scalar identities: (s*a)*b == s*(a*b)
    const DenseMatrix a = oracle::random_matrix(6, 2, 4);
    REQUIRE(rel_fro_dist(slr::matmul(3.0 * a, m), 3.0 * slr::matmul(a, m)) < 1e-15);
}

TEST_CASE("matmul rejects mismatched inner dimensions", "[matrix]") {
    const DenseMatrix a(2, 3, 1.0), b(4, 2, 1.0);
    REQUIRE_THROWS_AS(slr::matmul(a, b), slr::DimensionMismatch);
}

TEST_CASE("matmul_at_b equals transpose-then-multiply", "[matrix]") {
    const DenseMatrix a = oracle::random_matrix(21, 7, 4);
    const DenseMatrix b = oracle::random_matrix(22, 7, 3);
    REQUIRE(rel_fro_dist(slr::matmul_at_b(a, b),
                         oracle::naive_matmul(a.transpose(), b)) < 1e-13);
}

TEST_CASE("entrywise and frobenius norms", "[matrix]") {
    const DenseMatrix m{{1.0, -2.0}, {3.0, 0.0}};
    REQUIRE(slr::norm(m, NormKind::entrywise_l1) == 6.0);
    REQUIRE(slr::norm(m, NormKind::frobenius) == Catch::Approx(std::sqrt(14.0)));
}

TEST_CASE("nuclear norm of a diagonal matrix", "[svd]") {
    const DenseMatrix m{{3.0, 0.0}, {0.0, 4.0}};
    REQUIRE(slr::norm(m, NormKind::nuclear) == Catch::Approx(7.0).margin(1e-12));
    REQUIRE(slr::norm(m, NormKind::spectral) == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("nuclear norm matches closed-form Gram eigenvalues on 5x3", "[svd]") {
    const DenseMatrix m = oracle::random_matrix(31, 5, 3);
    // independent route: closed-form eigenvalues of the 3x3 Gram matrix
    const DenseMatrix gram = oracle::naive_matmul(m.transpose(), m);
    const std::vector<double> ev = oracle::sym3_eigenvalues(gram);
    double expected = 0.0;
    for (double l : ev) expected += std::sqrt(std::max(l, 0.0));
    REQUIRE(slr::norm(m, NormKind::nuclear) == Catch::Approx(expected).margin(1e-9));

    // and the svd route agrees with itself
    const slr::SvdFactors f = slr::svd_thin(m);
    double sum = 0.0;
    for (double s : f.sigma) sum += s;
    REQUIRE(slr::norm(m, NormKind::nuclear) == Catch::Approx(sum).margin(1e-12));
}

TEST_CASE("svd of identity and diagonal matrices", "[svd]") {
    const slr::SvdFactors fi = slr::svd_thin(DenseMatrix::identity(3));
    REQUIRE(fi.sigma.size() == 3);
    for (double s : fi.sigma) REQUIRE(s == Catch::Approx(1.0).margin(1e-12));

    const DenseMatrix d{{3.0, 0.0}, {0.0, 4.0}};
    const slr::SvdFactors fd = slr::svd_thin(d);
    REQUIRE(fd.sigma[0] == Catch::Approx(4.0).margin(1e-12));
    REQUIRE(fd.sigma[1] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("svd of a random tall matrix satisfies all invariants", "[svd]") {
    const DenseMatrix m = oracle::random_matrix(77, 64, 8);
    check_svd_invariants(m);

    // sigma^2 are eigenvalues of M'M: eigen-residual check through naive ops.
    const slr::SvdFactors f = slr::svd_thin(m);
    const DenseMatrix gram = oracle::naive_matmul(m.transpose(), m);
    const double lmax = f.sigma[0] * f.sigma[0];
    for (std::size_t i = 0; i < f.sigma.size(); ++i) {
        double resid = 0.0;
        for (std::size_t row = 0; row < gram.rows(); ++row) {
            double gv = 0.0;
            for (std::size_t k = 0; k < gram.cols(); ++k) gv += gram(row, k) * f.vt(i, k);
            const double diff = gv - f.sigma[i] * f.sigma[i] * f.vt(i, row);
            resid += diff * diff;
        }
        REQUIRE(std::sqrt(resid) <= 1e-9 * lmax);
    }
}

TEST_CASE("svd handles wide, rank-deficient, and zero matrices", "[svd]") {
    check_svd_invariants(oracle::random_matrix(91, 3, 7));

    // exact rank-1: spurious singular values must be zeroed, not kept
    const DenseMatrix u = oracle::random_matrix(92, 6, 1);
    const DenseMatrix v = oracle::random_matrix(93, 1, 4);
    const DenseMatrix rank1 = oracle::naive_matmul(u, v);
    check_svd_invariants(rank1);
    const slr::SvdFactors f = slr::svd_thin(rank1);
    for (std::size_t i = 1; i < f.sigma.size(); ++i) REQUIRE(f.sigma[i] == 0.0);

    const DenseMatrix z(5, 3, 0.0);
    check_svd_invariants(z);
    const slr::SvdFactors fz = slr::svd_thin(z);
    for (double s : fz.sigma) REQUIRE(s == 0.0);
}

TEST_CASE("svd then reconstruct is idempotent", "[svd]") {
    const DenseMatrix m = oracle::random_matrix(55, 20, 6);
    const DenseMatrix r1 = slr::svd_thin(m).reconstruct();
    const DenseMatrix r2 = slr::svd_thin(r1).reconstruct();
    REQUIRE(rel_fro_dist(r2, r1) < 1e-9);
}

TEST_CASE("svd is deterministic", "[svd]") {
    const DenseMatrix m = oracle::random_matrix(123, 30, 5);
    const slr::SvdFactors a = slr::svd_thin(m);
    const slr::SvdFactors b = slr::svd_thin(m);
    REQUIRE(a.sigma == b.sigma);
    REQUIRE(a.u.data() == b.u.data());
    REQUIRE(a.vt.data() == b.vt.data());
}

TEST_CASE("svd rejects non-finite input", "[svd]") {
    DenseMatrix m(2, 2, 1.0);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(slr::svd_thin(m), slr::InvalidInput);
    REQUIRE_THROWS_AS(slr::norm(m, NormKind::frobenius), slr::InvalidInput);
}

TEST_CASE("norm ordering nuclear >= frobenius >= spectral", "[svd]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DenseMatrix m = oracle::random_matrix(seed, 6, 4);
        const double nuc = slr::norm(m, NormKind::nuclear);
        const double fro = slr::norm(m, NormKind::frobenius);
        const double spec = slr::norm(m, NormKind::spectral);
        REQUIRE(nuc >= fro - 1e-10);
        REQUIRE(fro >= spec - 1e-10);
    }
    // equality chain on rank-1 inputs
    const DenseMatrix u = oracle::random_matrix(7, 5, 1);
    const DenseMatrix v = oracle::random_matrix(8, 1, 3);
    const DenseMatrix r1 = oracle::naive_matmul(u, v);
    const double nuc = slr::norm(r1, NormKind::nuclear);
    const double fro = slr::norm(r1, NormKind::frobenius);
    const double spec = slr::norm(r1, NormKind::spectral);
    REQUIRE(nuc == Catch::Approx(fro).margin(1e-9));
    REQUIRE(fro == Catch::Approx(spec).margin(1e-9));
}

TEST_CASE("csv write/read round-trips bit-exactly", "[matrix]") {
    DenseMatrix m = oracle::random_matrix(42, 4, 3);
    m(0, 0) = 1.0 / 3.0;
    m(1, 2) = -2.2250738585072014e-308;  // smallest normal double
    m(2, 1) = 0.1 + 0.2;

    std::stringstream buf;
    slr::write_csv(m, buf);
    const DenseMatrix back = slr::read_csv(buf);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    REQUIRE(back.data() == m.data());
}

TEST_CASE("csv reader rejects malformed input", "[matrix]") {
    std::stringstream missing_header("1.0,2.0\n");
    REQUIRE_THROWS_AS(slr::read_csv(missing_header), slr::InvalidInput);

    std::stringstream short_row("2,2\n1.0,2.0\n3.0\n");
    REQUIRE_THROWS_AS(slr::read_csv(short_row), slr::InvalidInput);

    std::stringstream non_finite("1,2\nnan,1.0\n");
    REQUIRE_THROWS_AS(slr::read_csv(non_finite), slr::InvalidInput);
}

TEST_CASE("constructors validate shapes", "[matrix]") {
    REQUIRE_THROWS_AS(DenseMatrix(0, 3), slr::InvalidInput);
    REQUIRE_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1.0}), slr::DimensionMismatch);
    REQUIRE_THROWS_AS((DenseMatrix{{1.0, 2.0}, {3.0}}), slr::DimensionMismatch);
}
