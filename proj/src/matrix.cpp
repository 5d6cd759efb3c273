#include "cznd/matrix.hpp"

#include <cmath>

namespace cznd {

namespace {
void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
    if (!a.same_shape(b))
        throw DimensionError(std::string(op) + ": shape mismatch " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
}
}  // namespace

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    CMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("from_rows: ragged rows");
        std::size_t j = 0;
        for (Complex z : row) m.set(i, j++, z);
        ++i;
    }
    return m;
}

double RVector::norm() const {
    double s = 0.0;
    for (double x : data) s += x * x;
    return std::sqrt(s);
}

double RVector::inf_norm() const {
    double s = 0.0;
    for (double x : data) s = std::max(s, std::abs(x));
    return s;
}

RVector operator+(const RVector& a, const RVector& b) {
    if (a.len() != b.len()) throw DimensionError("RVector +: length mismatch");
    RVector r(a.len());
    for (std::size_t i = 0; i < a.len(); ++i) r[i] = a[i] + b[i];
    return r;
}

RVector operator-(const RVector& a, const RVector& b) {
    if (a.len() != b.len()) throw DimensionError("RVector -: length mismatch");
    RVector r(a.len());
    for (std::size_t i = 0; i < a.len(); ++i) r[i] = a[i] - b[i];
    return r;
}

RVector operator*(double s, const RVector& v) {
    RVector r(v.len());
    for (std::size_t i = 0; i < v.len(); ++i) r[i] = s * v[i];
    return r;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "add");
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            r.re(i, j) = a.re(i, j) + b.re(i, j);
            r.im(i, j) = a.im(i, j) + b.im(i, j);
        }
    return r;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "sub");
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            r.re(i, j) = a.re(i, j) - b.re(i, j);
            r.im(i, j) = a.im(i, j) - b.im(i, j);
        }
    return r;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) +
                             " vs " + std::to_string(b.rows()));
    CMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double ar = a.re(i, k), ai = a.im(i, k);
            if (ar == 0.0 && ai == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                double br = b.re(k, j), bi = b.im(k, j);
                r.re(i, j) += ar * br - ai * bi;
                r.im(i, j) += ar * bi + ai * br;
            }
        }
    return r;
}

CMatrix scale(const CMatrix& m, Complex s) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            r.re(i, j) = m.re(i, j) * s.real() - m.im(i, j) * s.imag();
            r.im(i, j) = m.re(i, j) * s.imag() + m.im(i, j) * s.real();
        }
    return r;
}

CMatrix conjugate(const CMatrix& m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            r.re(i, j) = m.re(i, j);
            r.im(i, j) = -m.im(i, j);
        }
    return r;
}

CMatrix transpose(const CMatrix& m) {
    CMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            r.re(j, i) = m.re(i, j);
            r.im(j, i) = m.im(i, j);
        }
    return r;
}

CMatrix hermitian(const CMatrix& m) { return transpose(conjugate(m)); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double ar = a.re(i, j), ai = a.im(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    double br = b.re(k, l), bi = b.im(k, l);
                    r.re(i * b.rows() + k, j * b.cols() + l) = ar * br - ai * bi;
                    r.im(i * b.rows() + k, j * b.cols() + l) = ar * bi + ai * br;
                }
        }
    return r;
}

CMatrix vec(const CMatrix& m) {
    CMatrix v(m.rows() * m.cols(), 1);
    std::size_t k = 0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) {
            v.re(k, 0) = m.re(i, j);
            v.im(k, 0) = m.im(i, j);
            ++k;
        }
    return v;
}

CMatrix unvec(const CMatrix& v, std::size_t rows, std::size_t cols) {
    if (!v.is_column_vector() || v.rows() != rows * cols)
        throw DimensionError("unvec: vector of length " + std::to_string(v.rows()) +
                             " cannot fill " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    CMatrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) {
            m.re(i, j) = v.re(k, 0);
            m.im(i, j) = v.im(k, 0);
            ++k;
        }
    return m;
}

double frobenius_norm(const CMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            s += m.re(i, j) * m.re(i, j) + m.im(i, j) * m.im(i, j);
    return std::sqrt(s);
}

RVector apply_real(const CMatrix& m, const RVector& v) {
    if (m.cols() != v.len()) throw DimensionError("apply_real: dimension mismatch");
    RVector r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m.re(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

}  // namespace cznd
