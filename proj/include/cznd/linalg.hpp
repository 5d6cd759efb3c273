#pragma once

#include <vector>

#include "cznd/matrix.hpp"

namespace cznd {

/// LU factorization with partial pivoting, kept around so one factorization
/// can serve several right-hand sides within an integrator step.
struct LuFactors {
    CMatrix lu;                 // packed L (unit diagonal) and U
    std::vector<std::size_t> perm;
    int perm_sign = 1;
};

/// Throws SingularMatrix when a pivot is zero to tolerance.
LuFactors lu_factor(const CMatrix& a);

CMatrix lu_solve_factored(const LuFactors& f, const CMatrix& b);

/// Solve a*x = b for square a; throws SingularMatrix.
CMatrix lu_solve(const CMatrix& a, const CMatrix& b);
RVector lu_solve(const CMatrix& a, const RVector& b);

/// Determinant via LU; log-magnitude tracked to avoid overflow.
struct LogDet {
    double log_abs;     // -inf for exactly singular
    Complex phase;      // unit modulus (sign for real matrices)
};
LogDet log_determinant(const CMatrix& a);
Complex determinant(const CMatrix& a);

struct SvdResult {
    CMatrix u;                           // m x k, orthonormal columns
    std::vector<double> singular_values; // descending, k = min(m, n)
    CMatrix v;                           // n x k, orthonormal columns
};

/// Thin SVD by one-sided Jacobi; throws NumericalFailure on non-convergence.
SvdResult svd(const CMatrix& m);

/// Moore-Penrose pseudo-inverse.  Singular values below rcond * sigma_max
/// are treated as zero; rcond defaults to 1e-12.
CMatrix pinv(const CMatrix& m, double rcond = 1e-12);

/// 2-norm condition number estimate (sigma_max / sigma_min).
double svd_condition(const CMatrix& m);

/// Eigenvalues of a square complex matrix: Householder Hessenberg reduction
/// followed by Wilkinson-shifted QR, iteration cap 100*n.
std::vector<Complex> eigenvalues(const CMatrix& m);

}  // namespace cznd
