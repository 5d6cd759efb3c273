#include "cznd/problem.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "cznd/linalg.hpp"

namespace cznd {

TimeMatrix TimeMatrix::from_exprs(
    std::size_t rows, std::size_t cols,
    const std::vector<std::pair<std::string, std::string>>& re_im_texts) {
    if (re_im_texts.size() != rows * cols)
        throw DimensionError("from_exprs: expected " + std::to_string(rows * cols) +
                             " entries, got " + std::to_string(re_im_texts.size()));
    TimeMatrix tm(rows, cols);
    for (std::size_t k = 0; k < re_im_texts.size(); ++k) {
        const auto& [re_text, im_text] = re_im_texts[k];
        texpr::Expr re = texpr::parse(re_text);
        texpr::Expr im = texpr::parse(im_text);
        texpr::Expr re_dot = texpr::differentiate(re);
        texpr::Expr im_dot = texpr::differentiate(im);
        Entry& e = tm.entries_[k];
        e.re = [re](double t) { return texpr::eval(re, t); };
        e.im = [im](double t) { return texpr::eval(im, t); };
        e.re_dot = [re_dot](double t) { return texpr::eval(re_dot, t); };
        e.im_dot = [im_dot](double t) { return texpr::eval(im_dot, t); };
        e.re_src = re_text;
        e.im_src = im_text;
    }
    return tm;
}

CMatrix TimeMatrix::eval_at(double tau) const {
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const Entry& e = entry(i, j);
            m.re(i, j) = e.re ? e.re(tau) : 0.0;
            m.im(i, j) = e.im ? e.im(tau) : 0.0;
        }
    return m;
}

CMatrix TimeMatrix::derivative_at(double tau) const {
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const Entry& e = entry(i, j);
            m.re(i, j) = e.re_dot ? e.re_dot(tau) : 0.0;
            m.im(i, j) = e.im_dot ? e.im_dot(tau) : 0.0;
        }
    return m;
}

TvsscmeProblem example3() {
    TvsscmeProblem p;
    p.m = 2;
    p.n = 2;
    p.F = TimeMatrix::from_exprs(2, 2,
                                 {{"6+sin(t)", "cos(t)"},
                                  {"cos(t)", "sin(t)"},
                                  {"cos(t)", "sin(t)"},
                                  {"4+sin(t)", "cos(t)"}});
    p.A = TimeMatrix::from_exprs(2, 2,
                                 {{"cos(t)", "sin(t)"},
                                  {"sin(t)", "cos(t)"},
                                  {"-sin(t)", "cos(t)"},
                                  {"cos(t)", "-sin(t)"}});
    p.C = TimeMatrix::from_exprs(
        2, 2,
        {{"2*cos(t)^2-2*cos(t)*sin(t)+6*sin(t)", "2*cos(t)^2+2*cos(t)*sin(t)+6*sin(t)"},
         {"4*cos(t)+2*cos(t)*sin(t)-2*cos(t)^2", "4*cos(t)+2*cos(t)*sin(t)+2*cos(t)^2"},
         {"-2*sin(2*t)-6*cos(t)+2", "-2*sin(2*t)-6*cos(t)-2"},
         {"2*sin(2*t)-4*sin(t)-2", "-2*sin(2*t)-4*sin(t)-2"}});
    p.exact = [](double t) {
        double s = std::sin(t), c = std::cos(t);
        CMatrix x(2, 2);
        x.set(0, 0, {s, s});
        x.set(0, 1, {c, c});
        x.set(1, 0, {-c, -c});
        x.set(1, 1, {-s, -s});
        return x;
    };
    p.exact_derivative = [](double t) {
        double s = std::sin(t), c = std::cos(t);
        CMatrix x(2, 2);
        x.set(0, 0, {c, c});
        x.set(0, 1, {-s, -s});
        x.set(1, 0, {s, s});
        x.set(1, 1, {-c, -c});
        return x;
    };
    return p;
}

RVector stack_real_imag(const CMatrix& x) {
    CMatrix v = vec(x);
    RVector r(2 * v.rows());
    for (std::size_t i = 0; i < v.rows(); ++i) {
        r[i] = v.re(i, 0);
        r[v.rows() + i] = v.im(i, 0);
    }
    return r;
}

namespace {

CMatrix real_part(const CMatrix& m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.re(i, j) = m.re(i, j);
    return r;
}

CMatrix imag_part(const CMatrix& m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.re(i, j) = m.im(i, j);
    return r;
}

/// [K11 K12; K21 K22] from real/imag parts of F and A (Kronecker blocks).
CMatrix assemble_wr(const CMatrix& f, const CMatrix& a, std::size_t m, std::size_t n) {
    CMatrix fr_t = transpose(real_part(f));
    CMatrix fi_t = transpose(imag_part(f));
    CMatrix ar = real_part(a);
    CMatrix ai = imag_part(a);
    CMatrix im_ = CMatrix::identity(m);
    CMatrix in_ = CMatrix::identity(n);

    CMatrix k11 = kron(fr_t, im_) - kron(in_, ar);
    CMatrix k12 = scale(kron(fi_t, im_) + kron(in_, ai), {-1.0, 0.0});
    CMatrix k21 = kron(fi_t, im_) - kron(in_, ai);
    CMatrix k22 = kron(fr_t, im_) + kron(in_, ar);

    std::size_t mn = m * n;
    CMatrix w(2 * mn, 2 * mn);
    for (std::size_t i = 0; i < mn; ++i)
        for (std::size_t j = 0; j < mn; ++j) {
            w.re(i, j) = k11.re(i, j);
            w.re(i, mn + j) = k12.re(i, j);
            w.re(mn + i, j) = k21.re(i, j);
            w.re(mn + i, mn + j) = k22.re(i, j);
        }
    return w;
}

RVector stack_c(const CMatrix& c) { return stack_real_imag(c); }

}  // namespace

WrBr build_wr_br(const TvsscmeProblem& p, double tau) {
    CMatrix f = p.F.eval_at(tau), fd = p.F.derivative_at(tau);
    CMatrix a = p.A.eval_at(tau), ad = p.A.derivative_at(tau);
    CMatrix c = p.C.eval_at(tau), cd = p.C.derivative_at(tau);
    WrBr out;
    out.wr = assemble_wr(f, a, p.m, p.n);
    out.wr_dot = assemble_wr(fd, ad, p.m, p.n);
    out.br = stack_c(c);
    out.br_dot = stack_c(cd);
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

UniquenessReport check_uniqueness(const TvsscmeProblem& p,
                                  const std::vector<double>& tau_grid, double eps_eig,
                                  double eps_det) {
    if (tau_grid.empty())
        throw std::invalid_argument("check_uniqueness: empty tau grid");
    UniquenessReport rep;
    rep.tau_grid = tau_grid;
    rep.min_eigen_gap = std::numeric_limits<double>::infinity();
    rep.min_abs_det = std::numeric_limits<double>::infinity();
    double first_det_sign = 0.0;

    for (double tau : tau_grid) {
        CMatrix a = p.A.eval_at(tau);
        CMatrix f = p.F.eval_at(tau);
        auto spec_aa = eigenvalues(a * conjugate(a));
        auto spec_ff = eigenvalues(f * conjugate(f));
        double gap = std::numeric_limits<double>::infinity();
        for (Complex la : spec_aa)
            for (Complex lf : spec_ff) gap = std::min(gap, std::abs(la - lf));
        rep.min_eigen_gap = std::min(rep.min_eigen_gap, gap);
        rep.spectrum_aa.push_back(std::move(spec_aa));
        rep.spectrum_ff.push_back(std::move(spec_ff));

        CMatrix wr = build_wr_br(p, tau).wr;
        LogDet ld = log_determinant(wr);
        double det = (ld.log_abs == -std::numeric_limits<double>::infinity())
                         ? 0.0
                         : ld.phase.real() * std::exp(ld.log_abs);
        rep.dets.push_back(det);
        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(det));
        double sign = det > 0 ? 1.0 : (det < 0 ? -1.0 : 0.0);
        if (first_det_sign == 0.0)
            first_det_sign = sign;
        else if (sign != 0.0 && sign != first_det_sign)
            rep.det_sign_change = true;
    }
    rep.eigen_ok = rep.min_eigen_gap > eps_eig;
    rep.det_ok = rep.min_abs_det > eps_det && !rep.det_sign_change;
    rep.unique = rep.eigen_ok && rep.det_ok;
    return rep;
}

UniquenessReport uniqueness_eigen(const TvsscmeProblem& p,
                                  const std::vector<double>& tau_grid, double eps_eig) {
    UniquenessReport rep = check_uniqueness(p, tau_grid, eps_eig, 0.0);
    rep.unique = rep.eigen_ok;
    return rep;
}

UniquenessReport uniqueness_det(const TvsscmeProblem& p,
                                const std::vector<double>& tau_grid, double eps_det) {
    UniquenessReport rep = check_uniqueness(p, tau_grid, 0.0, eps_det);
    rep.unique = rep.det_ok;
    return rep;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Section {
    std::vector<std::pair<std::string, std::string>> entries;  // re ; im
    std::vector<std::size_t> line_numbers;
};

}  // namespace

TvsscmeProblem parse_problem_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    long m = -1, n = -1;
    std::map<std::string, Section> sections;
    std::string current;

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("dims", 0) == 0) {
            std::istringstream ls(line.substr(4));
            if (!(ls >> m >> n) || m < 1 || n < 1)
                throw ProblemLoadError(origin + ":" + std::to_string(lineno) +
                                       ": malformed dims line");
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            current = line.substr(1, line.size() - 2);
            if (current != "F" && current != "A" && current != "C" &&
                current != "EXACT")
                throw ProblemLoadError(origin + ":" + std::to_string(lineno) +
                                       ": unknown section [" + current + "]");
            continue;
        }
        if (current.empty())
            throw ProblemLoadError(origin + ":" + std::to_string(lineno) +
                                   ": entry before any section header");
        std::size_t sep = line.find(';');
        if (sep == std::string::npos)
            throw ProblemLoadError(origin + ":" + std::to_string(lineno) +
                                   ": expected 're_expr ; im_expr'");
        sections[current].entries.emplace_back(trim(line.substr(0, sep)),
                                               trim(line.substr(sep + 1)));
        sections[current].line_numbers.push_back(lineno);
    }

    if (m < 0) throw ProblemLoadError(origin + ": missing dims header");
    for (const char* name : {"F", "A", "C"})
        if (!sections.count(name))
            throw ProblemLoadError(origin + ": missing section [" + std::string(name) +
                                   "]");

    auto build = [&](const std::string& name, std::size_t rows,
                     std::size_t cols) -> TimeMatrix {
        const Section& sec = sections.at(name);
        if (sec.entries.size() != rows * cols)
            throw ProblemLoadError(origin + ": section [" + name + "] has " +
                                   std::to_string(sec.entries.size()) +
                                   " entries, expected " + std::to_string(rows) + "x" +
                                   std::to_string(cols) + " = " +
                                   std::to_string(rows * cols));
        try {
            return TimeMatrix::from_exprs(rows, cols, sec.entries);
        } catch (const texpr::ParseError& pe) {
            // Locate the offending entry for a row/col-aware message.
            for (std::size_t k = 0; k < sec.entries.size(); ++k) {
                const auto& [re, im] = sec.entries[k];
                for (const std::string& txt : {re, im}) {
                    try {
                        texpr::parse(txt);
                    } catch (const texpr::ParseError&) {
                        throw ProblemLoadError(
                            origin + ": section [" + name + "], row " +
                            std::to_string(k / cols + 1) + ", col " +
                            std::to_string(k % cols + 1) + ": " + pe.what());
                    }
                }
            }
            throw;
        }
    };

    TvsscmeProblem p;
    p.m = static_cast<std::size_t>(m);
    p.n = static_cast<std::size_t>(n);
    p.F = build("F", p.n, p.n);
    p.A = build("A", p.m, p.m);
    p.C = build("C", p.m, p.n);
    if (sections.count("EXACT")) {
        auto exact_tm =
            std::make_shared<TimeMatrix>(build("EXACT", p.m, p.n));
        p.exact = [exact_tm](double t) { return exact_tm->eval_at(t); };
        p.exact_derivative = [exact_tm](double t) {
            return exact_tm->derivative_at(t);
        };
    }
    return p;
}

TvsscmeProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemLoadError("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str(), path);
}

}  // namespace cznd
