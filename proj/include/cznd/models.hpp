#pragma once

#include <functional>
#include <memory>
#include <string>

#include "cznd/matrix.hpp"
#include "cznd/problem.hpp"

namespace cznd {

struct ComplexGainUnsupported : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Regulation parameter; the real part must be positive, the imaginary part
/// is free.
struct Gain {
    double re;
    double im;

    explicit Gain(double re_, double im_ = 0.0) : re(re_), im(im_) {
        if (!(re > 0.0))
            throw std::invalid_argument("Gain: real part must be > 0");
    }
    Complex value() const { return {re, im}; }
    bool is_real() const { return im == 0.0; }
};

/// Elementwise odd, monotonically increasing activation.  Applied to a real
/// error component directly; for complex error entries the convention is
/// real-elementwise application to the re and im parts, which for the linear
/// case equals acting on the entry as a whole.
class Activation {
public:
    virtual ~Activation() = default;
    virtual double apply(double x) const = 0;
    virtual Complex apply(Complex z) const {
        return {apply(z.real()), apply(z.imag())};
    }
};

class LinearActivation final : public Activation {
public:
    double apply(double x) const override { return x; }
    using Activation::apply;
};

/// Implicit-linear ODE "mass(tau) * state' = forcing(tau, state)" over the
/// stacked real state of length 2mn.
struct ModelSystem {
    std::size_t dim = 0;
    std::string label;
    bool mass_state_independent = true;
    std::function<CMatrix(double, const RVector&)> mass_at;
    std::function<RVector(double, const RVector&)> forcing_at;
};

/// State lifting: v in R^{2mn} -> X = unvec(v[0..mn)) + i*unvec(v[mn..2mn)).
CMatrix lift_state(const RVector& v, std::size_t m, std::size_t n);
RVector flatten_state(const CMatrix& x);

/// Real-field model: mass = W_R, forcing = B_R' - W_R' x - gamma*act(W_R x - B_R).
/// Throws ComplexGainUnsupported when gamma.im != 0.
ModelSystem con_cznd2_system(const TvsscmeProblem& p, Gain gamma,
                             std::shared_ptr<const Activation> act);

/// Complex-error model driven by E = X F - A conj(X) - C.
ModelSystem con_cznd1_system(const TvsscmeProblem& p, Gain gamma,
                             std::shared_ptr<const Activation> act);

/// Conjugated complex-error model driven by E = conj(X F - A conj(X) - C).
ModelSystem con_cznd1_conj_system(const TvsscmeProblem& p, Gain gamma,
                                  std::shared_ptr<const Activation> act);

}  // namespace cznd
