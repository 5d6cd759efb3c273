#include "cznd/models.hpp"

namespace cznd {

CMatrix lift_state(const RVector& v, std::size_t m, std::size_t n) {
    std::size_t mn = m * n;
    if (v.len() != 2 * mn)
        throw DimensionError("lift_state: state length " + std::to_string(v.len()) +
                             " != 2mn = " + std::to_string(2 * mn));
    CMatrix x(m, n);
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            x.re(i, j) = v[k];
            x.im(i, j) = v[mn + k];
            ++k;
        }
    return x;
}

RVector flatten_state(const CMatrix& x) { return stack_real_imag(x); }

namespace {

CMatrix real_of(const CMatrix& m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.re(i, j) = m.re(i, j);
    return r;
}

CMatrix imag_of(const CMatrix& m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.re(i, j) = m.im(i, j);
    return r;
}

/// [TL TR; BL BR] of equally sized real blocks.
CMatrix four_blocks(const CMatrix& tl, const CMatrix& tr, const CMatrix& bl,
                    const CMatrix& br) {
    std::size_t mn = tl.rows();
    CMatrix w(2 * mn, 2 * mn);
    for (std::size_t i = 0; i < mn; ++i)
        for (std::size_t j = 0; j < mn; ++j) {
            w.re(i, j) = tl.re(i, j);
            w.re(i, mn + j) = tr.re(i, j);
            w.re(mn + i, j) = bl.re(i, j);
            w.re(mn + i, mn + j) = br.re(i, j);
        }
    return w;
}

/// gamma (x) act(E) applied entrywise, then split as [vec(re); vec(im)].
RVector gamma_act_split(const CMatrix& base, const CMatrix& err, Complex gamma,
                        const Activation& act) {
    CMatrix total(err.rows(), err.cols());
    for (std::size_t i = 0; i < err.rows(); ++i)
        for (std::size_t j = 0; j < err.cols(); ++j)
            total.set(i, j, base(i, j) - gamma * act.apply(err(i, j)));
    return stack_real_imag(total);
}

}  // namespace

ModelSystem con_cznd2_system(const TvsscmeProblem& p, Gain gamma,
                             std::shared_ptr<const Activation> act) {
    if (!gamma.is_real())
        throw ComplexGainUnsupported(
            "con_cznd2_system: the real-field error model only supports a real "
            "gain");
    ModelSystem sys;
    sys.dim = 2 * p.m * p.n;
    sys.label = "con-cznd2";
    TvsscmeProblem prob = p;
    double g = gamma.re;
    sys.mass_at = [prob](double tau, const RVector&) {
        return build_wr_br(prob, tau).wr;
    };
    sys.forcing_at = [prob, g, act](double tau, const RVector& x) {
        WrBr w = build_wr_br(prob, tau);
        RVector err = apply_real(w.wr, x) - w.br;
        RVector forcing = w.br_dot - apply_real(w.wr_dot, x);
        for (std::size_t i = 0; i < forcing.len(); ++i)
            forcing[i] -= g * act->apply(err[i]);
        return forcing;
    };
    return sys;
}

ModelSystem con_cznd1_system(const TvsscmeProblem& p, Gain gamma,
                             std::shared_ptr<const Activation> act) {
    ModelSystem sys;
    sys.dim = 2 * p.m * p.n;
    sys.label = "con-cznd1";
    TvsscmeProblem prob = p;
    Complex g = gamma.value();
    std::size_t m = p.m, n = p.n;
    sys.mass_at = [prob, m, n](double tau, const RVector&) {
        CMatrix pk = kron(transpose(prob.F.eval_at(tau)), CMatrix::identity(m));
        CMatrix qk = kron(CMatrix::identity(n), prob.A.eval_at(tau));
        return four_blocks(real_of(pk) - real_of(qk),
                           scale(imag_of(pk) + imag_of(qk), {-1.0, 0.0}),
                           imag_of(pk) - imag_of(qk), real_of(pk) + real_of(qk));
    };
    sys.forcing_at = [prob, g, act, m, n](double tau, const RVector& v) {
        CMatrix x = lift_state(v, m, n);
        CMatrix f = prob.F.eval_at(tau), fd = prob.F.derivative_at(tau);
        CMatrix a = prob.A.eval_at(tau), ad = prob.A.derivative_at(tau);
        CMatrix c = prob.C.eval_at(tau), cd = prob.C.derivative_at(tau);
        CMatrix xc = conjugate(x);
        CMatrix err = x * f - a * xc - c;
        CMatrix base = cd + ad * xc - x * fd;
        return gamma_act_split(base, err, g, *act);
    };
    return sys;
}

ModelSystem con_cznd1_conj_system(const TvsscmeProblem& p, Gain gamma,
                                  std::shared_ptr<const Activation> act) {
    ModelSystem sys;
    sys.dim = 2 * p.m * p.n;
    sys.label = "con-cznd1-conj";
    TvsscmeProblem prob = p;
    Complex g = gamma.value();
    std::size_t m = p.m, n = p.n;
    sys.mass_at = [prob, m, n](double tau, const RVector&) {
        CMatrix hk = kron(hermitian(prob.F.eval_at(tau)), CMatrix::identity(m));
        CMatrix lk = kron(CMatrix::identity(n), conjugate(prob.A.eval_at(tau)));
        return four_blocks(real_of(hk) - real_of(lk), imag_of(hk) + imag_of(lk),
                           imag_of(hk) - imag_of(lk),
                           scale(real_of(hk) + real_of(lk), {-1.0, 0.0}));
    };
    sys.forcing_at = [prob, g, act, m, n](double tau, const RVector& v) {
        CMatrix x = lift_state(v, m, n);
        CMatrix f = prob.F.eval_at(tau), fd = prob.F.derivative_at(tau);
        CMatrix a = prob.A.eval_at(tau), ad = prob.A.derivative_at(tau);
        CMatrix c = prob.C.eval_at(tau), cd = prob.C.derivative_at(tau);
        CMatrix xc = conjugate(x);
        CMatrix err = xc * conjugate(f) - conjugate(a) * x - conjugate(c);
        CMatrix base = conjugate(cd) + conjugate(ad) * x - xc * conjugate(fd);
        return gamma_act_split(base, err, g, *act);
    };
    return sys;
}

}  // namespace cznd
