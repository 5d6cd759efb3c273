#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cznd/matrix.hpp"
#include "cznd/texpr.hpp"

namespace cznd {

struct ProblemLoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A time-dependent complex matrix: tau -> (M(tau), dM/dtau(tau)).
/// Entries are scalar functions for the real and imaginary parts plus their
/// derivatives; built either from texpr expressions or plain closures.
class TimeMatrix {
public:
    using Fn = std::function<double(double)>;

    struct Entry {
        Fn re, re_dot, im, im_dot;
        std::string re_src, im_src;  // expression text when available
    };

    TimeMatrix() = default;
    TimeMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    /// Entry expressions parsed with texpr; derivatives are symbolic.
    static TimeMatrix from_exprs(std::size_t rows, std::size_t cols,
                                 const std::vector<std::pair<std::string, std::string>>&
                                     re_im_texts);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Entry& entry(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Entry& entry(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    CMatrix eval_at(double tau) const;
    CMatrix derivative_at(double tau) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Entry> entries_;
};

/// The equation X(tau) F(tau) - A(tau) conj(X)(tau) = C(tau), with an
/// optional exact-solution oracle.
struct TvsscmeProblem {
    std::size_t m = 0, n = 0;
    TimeMatrix F;  // n x n
    TimeMatrix A;  // m x m
    TimeMatrix C;  // m x n
    std::function<CMatrix(double)> exact;               // may be empty
    std::function<CMatrix(double)> exact_derivative;    // may be empty
};

/// The worked 2x2 benchmark instance with its exact solution attached.
TvsscmeProblem example3();

/// Real-field embedding at a single tau: W_R, B_R and their derivatives.
struct WrBr {
    CMatrix wr;       // real 2mn x 2mn
    RVector br;       // 2mn
    CMatrix wr_dot;
    RVector br_dot;
};
WrBr build_wr_br(const TvsscmeProblem& p, double tau);

/// Fixed stacking [vec(X_r); vec(X_i)] shared by every model and residual.
RVector stack_real_imag(const CMatrix& x);

struct UniquenessReport {
    std::vector<double> tau_grid;
    double min_eigen_gap = 0.0;   // min over grid of min pairwise spectra distance
    double min_abs_det = 0.0;     // min over grid of |det(W_R)|
    bool det_sign_change = false;
    bool eigen_ok = false;
    bool det_ok = false;
    bool unique = false;
    // per-tau data for CSV emission (Fig-3-style panels)
    std::vector<std::vector<Complex>> spectrum_aa;  // eigenvalues of A*conj(A)
    std::vector<std::vector<Complex>> spectrum_ff;  // eigenvalues of F*conj(F)
    std::vector<double> dets;
};

UniquenessReport uniqueness_eigen(const TvsscmeProblem& p,
                                  const std::vector<double>& tau_grid,
                                  double eps_eig = 1e-8);
UniquenessReport uniqueness_det(const TvsscmeProblem& p,
                                const std::vector<double>& tau_grid,
                                double eps_det = 1e-12);
/// Both checks on one grid; unique = eigen_ok && det_ok.
UniquenessReport check_uniqueness(const TvsscmeProblem& p,
                                  const std::vector<double>& tau_grid,
                                  double eps_eig = 1e-8, double eps_det = 1e-12);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// Load a .tvp problem file (sections [F], [A], [C], optional [EXACT]).
TvsscmeProblem load_problem(const std::string& path);
TvsscmeProblem parse_problem_text(const std::string& text, const std::string& origin);

}  // namespace cznd
