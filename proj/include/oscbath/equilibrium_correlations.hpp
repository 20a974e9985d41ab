#pragma once

// Gaussian equilibrium characteristic functions at inverse temperature β,
// the three-point time correlation and its factorized large-time baseline,
// the shifted-contour evaluation of the decay cross-section, and exponential
// rate fitting.

#include "oscbath/symplectic_dynamics.hpp"

namespace oscbath {

struct ThermalState {
    double beta = 1.0;
    // η(r) = 1 + 2ϱ(r) = coth(βr/2); series for small βr/2 against cancellation.
    double eta(double r) const;
    Complex eta_c(Complex z) const;
    double rho_planck(double r) const { return 1.0 / std::expm1(beta * r); }
};

// ⟨f|η g⟩ with the thermal weight folded in.
Complex thermal_inner(const RadialFn& f, const RadialFn& g, const ThermalState& st);

// ω_f(W(f)) = exp(−¼⟨f|ηf⟩) ∈ (0,1].
double omega_f(const RadialFn& f, const ThermalState& st);

// ω(W(c⊕f)) = ω_f(v(c⊕f)) — the interacting equilibrium state.
double omega_interacting(const TestFunction& tf, const ThermalState& st,
                         const SymplecticMap& vmap);

// Non-interacting oscillator reference characteristic function with the
// shifted frequency α = sqrt(1 + λ²·norm_sq):
//   exp(−¼·coth(βα/2)·(Re(c)²/α + Im(c)²·α)).
Complex gibbs_particle_char(Complex c, const ModelParams& params, double beta);

// ω(Wf₁ Wh) ω(Wu)·exp(−½Re⟨v₁+v₃|ηe^{itr}u⟩ − (i/2)Im⟨v₁−v₃|e^{itr}u⟩) where
// ω(Wf₁Wh) carries the CCR phase; u is a field-side vector evolved by t.
Complex gaussian_three_point(const RadialFn& v1, const RadialFn& u, const RadialFn& v3,
                             double t, const ThermalState& st);

Complex three_point(const TestFunction& f1, const TestFunction& f2,
                    const TestFunction& f3, double t, const ThermalState& st,
                    const SymplecticMap& vmap);

// Factorized limit ω(Wf₁Wf₃)·ω(Wf₂).
Complex three_point_baseline(const TestFunction& f1, const TestFunction& f2,
                             const TestFunction& f3, const ThermalState& st,
                             const SymplecticMap& vmap);

struct CrossSection {
    double re_grid = 0.0, im_grid = 0.0;        // direct radial quadrature
    double re_contour = 0.0, im_contour = 0.0;  // shifted-contour representation
    double discrepancy() const {
        return std::max(std::abs(re_grid - re_contour), std::abs(im_grid - im_contour));
    }
};

// Re⟨v(f)|ηe^{itr}v(g)⟩ and Im⟨v(f)|e^{itr}v(g)⟩, both via grid quadrature of
// the exact strip-analytic elements and via the contour representation
// ½∫(aa′r³+bb′r+i(a′b−ab′)r²)·[coth(βr/2) or 1]·e^{itr}·h̃(r)dr shifted to
// Im = kappa_shift.
CrossSection decay_cross_section(const AnalyticTestFunction& f,
                                 const AnalyticTestFunction& g, double t,
                                 const ThermalState& st, double kappa_shift);

struct CorrelationSeries {
    std::vector<double> times;
    std::vector<Complex> values;
    Complex baseline{0.0, 0.0};
};

struct DecayFit {
    double rate = 0.0;       // positive = decay
    double prefactor = 0.0;  // C in C·e^{−rate·t}
    double r2 = 0.0;
};

DecayFit fit_decay_rate(const CorrelationSeries& series, double t_lo, double t_hi);

} // namespace oscbath
