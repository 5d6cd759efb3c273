#include "cznd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cznd {

namespace {

double abs2(Complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace

LuFactors lu_factor(const CMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("lu_factor: matrix not square");
    const std::size_t n = a.rows();
    LuFactors f;
    f.lu = a;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

    double max_entry = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            max_entry = std::max(max_entry, std::abs(f.lu(i, j)));
    const double pivot_tol =
        max_entry * static_cast<double>(n) * std::numeric_limits<double>::epsilon();

    CMatrix& lu = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = abs2(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = abs2(lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (std::sqrt(best) <= pivot_tol)
            throw SingularMatrix("lu_factor: pivot " + std::to_string(k) +
                                 " below tolerance");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu.re(k, j), lu.re(piv, j));
                std::swap(lu.im(k, j), lu.im(piv, j));
            }
            std::swap(f.perm[k], f.perm[piv]);
            f.perm_sign = -f.perm_sign;
        }
        const Complex pk = lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex m = lu(i, k) / pk;
            lu.set(i, k, m);
            if (m == Complex{}) continue;
            for (std::size_t j = k + 1; j < n; ++j)
                lu.set(i, j, lu(i, j) - m * lu(k, j));
        }
    }
    return f;
}

CMatrix lu_solve_factored(const LuFactors& f, const CMatrix& b) {
    const std::size_t n = f.lu.rows();
    if (b.rows() != n) throw DimensionError("lu_solve: rhs rows mismatch");
    const std::size_t nrhs = b.cols();
    CMatrix x(n, nrhs);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < nrhs; ++j) x.set(i, j, b(f.perm[i], j));
    // forward substitution (unit lower)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) {
            Complex l = f.lu(i, k);
            if (l == Complex{}) continue;
            for (std::size_t j = 0; j < nrhs; ++j) x.set(i, j, x(i, j) - l * x(k, j));
        }
    // back substitution
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            Complex u = f.lu(ii, k);
            if (u == Complex{}) continue;
            for (std::size_t j = 0; j < nrhs; ++j)
                x.set(ii, j, x(ii, j) - u * x(k, j));
        }
        Complex d = f.lu(ii, ii);
        for (std::size_t j = 0; j < nrhs; ++j) x.set(ii, j, x(ii, j) / d);
    }
    return x;
}

CMatrix lu_solve(const CMatrix& a, const CMatrix& b) {
    return lu_solve_factored(lu_factor(a), b);
}

RVector lu_solve(const CMatrix& a, const RVector& b) {
    CMatrix col(b.len(), 1);
    for (std::size_t i = 0; i < b.len(); ++i) col.re(i, 0) = b[i];
    CMatrix x = lu_solve_factored(lu_factor(a), col);
    RVector r(b.len());
    for (std::size_t i = 0; i < b.len(); ++i) r[i] = x.re(i, 0);
    return r;
}

LogDet log_determinant(const CMatrix& a) {
    LuFactors f;
    try {
        f = lu_factor(a);
    } catch (const SingularMatrix&) {
        return {-std::numeric_limits<double>::infinity(), Complex{1.0, 0.0}};
    }
    double log_abs = 0.0;
    Complex phase{static_cast<double>(f.perm_sign), 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex d = f.lu(i, i);
        double m = std::abs(d);
        log_abs += std::log(m);
        phase *= d / m;
    }
    return {log_abs, phase};
}

Complex determinant(const CMatrix& a) {
    LogDet ld = log_determinant(a);
    if (ld.log_abs == -std::numeric_limits<double>::infinity()) return {};
    return ld.phase * std::exp(ld.log_abs);
}

SvdResult svd(const CMatrix& m) {
    // One-sided Jacobi on the (possibly transposed) tall matrix.
    const bool flipped = m.rows() < m.cols();
    CMatrix a = flipped ? hermitian(m) : m;
    const std::size_t rows = a.rows(), cols = a.cols();

    CMatrix v = CMatrix::identity(cols);
    const double eps = std::numeric_limits<double>::epsilon();
    const int max_sweeps = 60;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < cols; ++p)
            for (std::size_t q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0;
                Complex apq{};
                for (std::size_t i = 0; i < rows; ++i) {
                    Complex xp = a(i, p), xq = a(i, q);
                    app += abs2(xp);
                    aqq += abs2(xq);
                    apq += std::conj(xp) * xq;
                }
                double mag = std::abs(apq);
                if (mag <= eps * std::sqrt(app * aqq) || mag == 0.0) continue;
                converged = false;
                // Absorb the phase of the cross term into column q, then a
                // real Jacobi rotation annihilates it.
                // Scaling column q by conj(phase) makes the cross term the
                // real number mag, so a real rotation can annihilate it.
                Complex phase = std::conj(apq / mag);
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    Complex xp = a(i, p), xq = phase * a(i, q);
                    a.set(i, p, c * xp - s * xq);
                    a.set(i, q, s * xp + c * xq);
                }
                for (std::size_t i = 0; i < cols; ++i) {
                    Complex vp = v(i, p), vq = phase * v(i, q);
                    v.set(i, p, c * vp - s * vq);
                    v.set(i, q, s * vp + c * vq);
                }
            }
    }
    if (!converged) throw NumericalFailure("svd: Jacobi sweeps did not converge");

    std::vector<double> sigma(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += abs2(a(i, j));
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    CMatrix u(rows, cols), vs(cols, cols);
    std::vector<double> sv(cols);
    double smax = sigma.empty() ? 0.0 : sigma[order[0]];
    for (std::size_t j = 0; j < cols; ++j) {
        std::size_t src = order[j];
        sv[j] = sigma[src];
        for (std::size_t i = 0; i < cols; ++i) vs.set(i, j, v(i, src));
        if (sigma[src] > smax * 1e-300 && sigma[src] > 0.0) {
            for (std::size_t i = 0; i < rows; ++i) u.set(i, j, a(i, src) / sigma[src]);
        }
    }
    // Complete null columns of u to an orthonormal set.
    for (std::size_t j = 0; j < cols; ++j) {
        double colnorm = 0.0;
        for (std::size_t i = 0; i < rows; ++i) colnorm += abs2(u(i, j));
        if (colnorm > 0.5) continue;
        for (std::size_t basis = 0; basis < rows; ++basis) {
            CMatrix cand(rows, 1);
            cand.re(basis, 0) = 1.0;
            for (std::size_t k = 0; k < cols; ++k) {
                if (k == j) continue;
                Complex proj{};
                for (std::size_t i = 0; i < rows; ++i)
                    proj += std::conj(u(i, k)) * cand(i, 0);
                for (std::size_t i = 0; i < rows; ++i)
                    cand.set(i, 0, cand(i, 0) - proj * u(i, k));
            }
            double nn = 0.0;
            for (std::size_t i = 0; i < rows; ++i) nn += abs2(cand(i, 0));
            if (nn > 0.5) {
                double inv = 1.0 / std::sqrt(nn);
                for (std::size_t i = 0; i < rows; ++i)
                    u.set(i, j, cand(i, 0) * inv);
                break;
            }
        }
    }

    if (flipped) return {vs, std::move(sv), u};
    return {u, std::move(sv), vs};
}

CMatrix pinv(const CMatrix& m, double rcond) {
    SvdResult s = svd(m);
    const double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
    const double cutoff = rcond * smax;
    const std::size_t k = s.singular_values.size();
    // pinv = V * diag(1/sigma) * U^H
    CMatrix r(m.cols(), m.rows());
    for (std::size_t t = 0; t < k; ++t) {
        double sv = s.singular_values[t];
        if (sv <= cutoff || sv == 0.0) continue;
        double inv = 1.0 / sv;
        for (std::size_t i = 0; i < m.cols(); ++i)
            for (std::size_t j = 0; j < m.rows(); ++j)
                r.set(i, j, r(i, j) + inv * s.v(i, t) * std::conj(s.u(j, t)));
    }
    return r;
}

double svd_condition(const CMatrix& m) {
    SvdResult s = svd(m);
    double smax = s.singular_values.front();
    double smin = s.singular_values.back();
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

namespace {

// Unitary 2x2 eliminating b from (a, b)^T: rows (conj(a), conj(b)) / r and
// (-b, a) / r.
struct Givens {
    Complex c1, c2;  // first row
    Complex d1, d2;  // second row
    bool identity;
};

Givens make_givens(Complex a, Complex b) {
    if (b == Complex{}) return {Complex{1, 0}, Complex{}, Complex{}, Complex{1, 0}, true};
    double r = std::hypot(std::abs(a), std::abs(b));
    return {std::conj(a) / r, std::conj(b) / r, -b / r, a / r, false};
}

void eig2x2(Complex a, Complex b, Complex c, Complex d, Complex& l1, Complex& l2) {
    Complex tr = a + d;
    Complex disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    l1 = (tr + disc) / 2.0;
    l2 = (tr - disc) / 2.0;
}

}  // namespace

std::vector<Complex> eigenvalues(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("eigenvalues: matrix not square");
    const std::size_t n = m.rows();
    std::vector<Complex> out;
    out.reserve(n);
    if (n == 0) return out;
    if (n == 1) return {m(0, 0)};

    CMatrix h = m;
    // Householder reduction to upper Hessenberg form.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colnorm += abs2(h(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0) continue;
        Complex x0 = h(k + 1, k);
        Complex alpha = (x0 == Complex{}) ? Complex{-colnorm, 0.0}
                                          : -(x0 / std::abs(x0)) * colnorm;
        std::vector<Complex> v(n, Complex{});
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += abs2(v[i]);
        if (vnorm2 == 0.0) continue;
        // H = I - 2 v v^H / |v|^2; apply left then right.
        for (std::size_t j = 0; j < n; ++j) {
            Complex s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h.set(i, j, h(i, j) - s * v[i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex s{};
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j)
                h.set(i, j, h(i, j) - s * std::conj(v[j]));
        }
    }

    const double eps = std::numeric_limits<double>::epsilon();
    std::size_t hi = n - 1;
    std::size_t iter_budget = 100 * n;
    while (true) {
        // Deflate converged subdiagonals.
        while (hi > 0) {
            double sub = std::abs(h(hi, hi - 1));
            if (sub <= eps * (std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi)))) {
                h.set(hi, hi - 1, Complex{});
                out.push_back(h(hi, hi));
                --hi;
            } else {
                break;
            }
        }
        if (hi == 0) {
            out.push_back(h(0, 0));
            break;
        }
        // Active block [lo, hi].
        std::size_t lo = hi;
        while (lo > 0) {
            double sub = std::abs(h(lo, lo - 1));
            if (sub <= eps * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)))) {
                h.set(lo, lo - 1, Complex{});
                break;
            }
            --lo;
        }
        if (hi - lo == 1) {
            Complex l1, l2;
            eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi), l1, l2);
            out.push_back(l1);
            out.push_back(l2);
            if (lo == 0) break;
            hi = lo - 1;
            continue;
        }
        if (iter_budget-- == 0)
            throw NumericalFailure("eigenvalues: QR iteration cap exceeded");

        // Wilkinson shift: trailing 2x2 eigenvalue closest to corner.
        Complex l1, l2;
        eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), l1, l2);
        Complex corner = h(hi, hi);
        Complex mu = (std::abs(l1 - corner) < std::abs(l2 - corner)) ? l1 : l2;

        // Explicit shifted QR step on the active block via Givens rotations.
        for (std::size_t i = lo; i <= hi; ++i) h.set(i, i, h(i, i) - mu);
        std::vector<Givens> rots(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            Givens g = make_givens(h(i, i), h(i + 1, i));
            rots[i - lo] = g;
            if (g.identity) continue;
            for (std::size_t j = i; j < n; ++j) {
                Complex a = h(i, j), b = h(i + 1, j);
                h.set(i, j, g.c1 * a + g.c2 * b);
                h.set(i + 1, j, g.d1 * a + g.d2 * b);
            }
        }
        for (std::size_t i = lo; i < hi; ++i) {
            const Givens& g = rots[i - lo];
            if (g.identity) continue;
            std::size_t top = std::min(i + 2, hi + 1);
            for (std::size_t r = 0; r < top; ++r) {
                Complex a = h(r, i), b = h(r, i + 1);
                h.set(r, i, a * std::conj(g.c1) + b * std::conj(g.c2));
                h.set(r, i + 1, a * std::conj(g.d1) + b * std::conj(g.d2));
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h.set(i, i, h(i, i) + mu);
    }
    return out;
}

}  // namespace cznd
