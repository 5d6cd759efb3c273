#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace cznd {

using Complex = std::complex<double>;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense complex matrix stored as separate real and imaginary parts
/// (row-major).  A matrix with an all-zero imaginary part behaves as a
/// real matrix under every operation.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), re_(rows * cols, 0.0), im_(rows * cols, 0.0) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.re(i, i) = 1.0;
        return m;
    }

    /// Row-by-row construction from complex entries.
    static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return rows_ * cols_; }

    double& re(std::size_t i, std::size_t j) { return re_[i * cols_ + j]; }
    double re(std::size_t i, std::size_t j) const { return re_[i * cols_ + j]; }
    double& im(std::size_t i, std::size_t j) { return im_[i * cols_ + j]; }
    double im(std::size_t i, std::size_t j) const { return im_[i * cols_ + j]; }

    Complex operator()(std::size_t i, std::size_t j) const {
        return {re(i, j), im(i, j)};
    }
    void set(std::size_t i, std::size_t j, Complex z) {
        re(i, j) = z.real();
        im(i, j) = z.imag();
    }

    bool same_shape(const CMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }
    bool is_column_vector() const { return cols_ == 1; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> re_;
    std::vector<double> im_;
};

/// Real vector of fixed length (houses the 2mn stacked state).
struct RVector {
    std::vector<double> data;

    RVector() = default;
    explicit RVector(std::size_t n) : data(n, 0.0) {}
    explicit RVector(std::vector<double> d) : data(std::move(d)) {}

    std::size_t len() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    double norm() const;      // Euclidean
    double inf_norm() const;
};

RVector operator+(const RVector& a, const RVector& b);
RVector operator-(const RVector& a, const RVector& b);
RVector operator*(double s, const RVector& v);

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

CMatrix scale(const CMatrix& m, Complex s);
CMatrix conjugate(const CMatrix& m);
CMatrix transpose(const CMatrix& m);
CMatrix hermitian(const CMatrix& m);

/// Kronecker product: entry ((i*b.rows+k),(j*b.cols+l)) = a(i,j)*b(k,l).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Column-major stacking into an (rows*cols)x1 column vector.
CMatrix vec(const CMatrix& m);

/// Inverse of vec; throws DimensionError if v is not rows*cols x 1.
CMatrix unvec(const CMatrix& v, std::size_t rows, std::size_t cols);

double frobenius_norm(const CMatrix& m);

/// Matrix-vector product of a real-valued CMatrix with an RVector.
RVector apply_real(const CMatrix& m, const RVector& v);

}  // namespace cznd
