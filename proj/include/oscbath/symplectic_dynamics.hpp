#pragma once

// The real-linear symplectic map v : ℂ⊕𝔣 → 𝔣, its inverse, the induced flow
// w_t, the symplectic form, and the analytic test-function class whose images
// live in the strip-analytic subspace used by the decay machinery.

#include "oscbath/scattering_ops.hpp"

namespace oscbath {

struct TestFunction {
    Complex c{0.0, 0.0};
    RadialFn f;

    static TestFunction zero(const RadialGrid& g) {
        TestFunction tf;
        tf.f = RadialFn::zero(g);
        return tf;
    }
};

// v(c⊕h) = W̄₊*h + cQ̄₊ − W̄₋*h̄ − c̄Q̄₋ (real-linear, not complex-linear).
struct SymplecticMap {
    const ScatteringOps* ops = nullptr;
    const SpectralData* sd = nullptr;
    const RadialGrid* grid = nullptr;
    // Cached adjoints of the conjugate blocks.
    Eigen::MatrixXcd wp_bar_adj, wm_bar_adj;
    Eigen::VectorXcd qp_bar, qm_bar;

    RadialFn v_map(const TestFunction& tf) const;
    TestFunction v_inverse(const RadialFn& g) const;
    TestFunction w_t(const TestFunction& tf, double t) const;
    // Flow applied directly to a field-side element u = v(x):
    // the advanced image is e^{itr}u; returns its preimage components.
    TestFunction w_t_of_image(const RadialFn& u, double t) const;
};

SymplecticMap make_symplectic_map(const ScatteringOps& ops, const SpectralData& sd,
                                  const RadialGrid& grid);

// Im⟨x|y⟩ on ℂ⊕𝔥: Im(conj(c)c′) + Im⟨f|f′⟩.
double symplectic_form(const TestFunction& x, const TestFunction& y);
double symplectic_form(const RadialFn& x, const RadialFn& y);
// ‖g‖₊ = ‖g‖ + ‖|k|^{−1/2}g‖ on the field part plus |c|.
double plus_norm(const TestFunction& x);

// Analytic radial profiles, closed under r ↦ −r conjugate reflection.
struct AnalyticProfile {
    enum class Kind { Gaussian, GaussianLorentz, GaussianPoly };
    Kind kind = Kind::Gaussian;
    double sigma = 1.0;
    double amp = 1.0;
    double pole = 0.5;  // GaussianLorentz: amp·e^{−z²/2σ²}·p²/(z²+p²)
    int degree = 0;     // GaussianPoly: amp·z^{2·degree}·e^{−z²/2σ²}

    Complex eval(Complex z) const;
};

struct AnalyticTestFunction {
    double a = 0.0, b = 0.0;
    AnalyticProfile profile;
    RadialFn r_element;     // (i·a·r^{1/2} + b·r^{−1/2})·profile(r) on nodes
    TestFunction preimage;  // v⁻¹ of r_element
};

// Builds the strip-analytic element and its v-preimage; checks the conjugate
// reflection rule and samples the weighted strip integral at 5 heights.
AnalyticTestFunction make_analytic(double a, double b, const AnalyticProfile& profile,
                                   const SymplecticMap& vmap, double kappa);

} // namespace oscbath
