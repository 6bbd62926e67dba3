#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "slr/errors.hpp"

namespace slr {

// Dense real matrix, row-major, 64-bit entries. Column views are
// materialized by copy; there is no striding or aliasing.
class DenseMatrix {
public:
    DenseMatrix() : rows_(0), cols_(0) {}

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0)
            throw InvalidInput("DenseMatrix: dimensions must be positive");
    }

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0)
            throw InvalidInput("DenseMatrix: dimensions must be positive");
        if (data_.size() != rows * cols)
            throw DimensionMismatch("DenseMatrix: data length != rows*cols");
    }

    // Row-wise brace construction, e.g. DenseMatrix({{1,2},{3,4}}).
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0)
            throw InvalidInput("DenseMatrix: dimensions must be positive");
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw DimensionMismatch("DenseMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

    bool is_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    std::vector<double> col(std::size_t j) const {
        std::vector<double> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = data_[i * cols_ + j];
        return c;
    }

    void set_col(std::size_t j, const std::vector<double>& c) {
        if (c.size() != rows_)
            throw DimensionMismatch("set_col: length mismatch");
        for (std::size_t i = 0; i < rows_; ++i) data_[i * cols_ + j] = c[i];
    }

    // Copy of the columns [first, first+count).
    DenseMatrix cols_block(std::size_t first, std::size_t count) const {
        DenseMatrix out(rows_, count);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < count; ++j)
                out(i, j) = (*this)(i, first + j);
        return out;
    }

    DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    DenseMatrix& operator+=(const DenseMatrix& o) {
        check_same(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    DenseMatrix& operator-=(const DenseMatrix& o) {
        check_same(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    DenseMatrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

private:
    void check_same(const DenseMatrix& o, const char* op) const {
        if (!same_shape(o))
            throw DimensionMismatch(std::string("matrix ") + op + ": shape " +
                                    shape_str() + " vs " + o.shape_str());
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    std::size_t rows_, cols_;
    std::vector<double> data_;
};

inline DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
inline DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
inline DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
inline DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

// C = A*B. Loop order i,k,j keeps the inner loop sequential in row-major data.
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("matmul: inner dimensions " + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()));
    DenseMatrix c(a.rows(), b.cols());
    const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* cd = c.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const double aik = ad[i * m + k];
            if (aik == 0.0) continue;
            const double* brow = bd + k * p;
            double* crow = cd + i * p;
            for (std::size_t j = 0; j < p; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    return matmul(a, b);
}

// A^T * B without forming the transpose.
inline DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows())
        throw DimensionMismatch("matmul_at_b: row counts " + std::to_string(a.rows()) +
                                " vs " + std::to_string(b.rows()));
    DenseMatrix c(a.cols(), b.cols());
    const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* cd = c.data().data();
    for (std::size_t k = 0; k < n; ++k) {
        const double* arow = ad + k * m;
        const double* brow = bd + k * p;
        for (std::size_t i = 0; i < m; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = cd + i * p;
            for (std::size_t j = 0; j < p; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

inline double entrywise_l1_norm(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += std::fabs(v);
    return s;
}

inline double frobenius_norm(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

inline double max_abs(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s = std::max(s, std::fabs(v));
    return s;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void require_finite(const DenseMatrix& m, const char* who) {
    if (!m.is_finite())
        throw InvalidInput(std::string(who) + ": input contains NaN/Inf");
}

// ---------------------------------------------------------------------------
// CSV serialization: header line "rows,cols", then one comma-separated row
// per line. 17 significant digits, which round-trips doubles exactly.
// ---------------------------------------------------------------------------

inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_csv(const DenseMatrix& m, std::ostream& out) {
    out << m.rows() << "," << m.cols() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ",";
            out << format_full(m(i, j));
        }
        out << "\n";
    }
}

inline void write_csv(const DenseMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("write_csv: cannot open " + path);
    write_csv(m, out);
}

inline DenseMatrix read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw InvalidInput("read_csv: empty input");
    std::size_t rows = 0, cols = 0;
    {
        std::istringstream hdr(line);
        char comma = 0;
        if (!(hdr >> rows >> comma >> cols) || comma != ',' || rows == 0 || cols == 0)
            throw InvalidInput("read_csv: bad header line '" + line + "'");
    }
    std::vector<double> data;
    data.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line))
            throw InvalidInput("read_csv: unexpected end of data at row " + std::to_string(i));
        const char* p = line.c_str();
        for (std::size_t j = 0; j < cols; ++j) {
            char* end = nullptr;
            double v = std::strtod(p, &end);
            if (end == p)
                throw InvalidInput("read_csv: bad value at row " + std::to_string(i) +
                                   ", col " + std::to_string(j));
            if (!std::isfinite(v))
                throw InvalidInput("read_csv: non-finite value at row " + std::to_string(i));
            data.push_back(v);
            p = end;
            if (*p == ',') ++p;
        }
    }
    return DenseMatrix(rows, cols, std::move(data));
}

inline DenseMatrix read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("read_csv: cannot open " + path);
    return read_csv(in);
}

}  // namespace slr
