#pragma once

// Radial momentum-space discretization of the rotation-invariant sector:
// composite Gauss–Legendre panels with log-spaced panels near 0 and geometric
// grading toward r = 1 (the resonance peak concentrates there for small
// coupling). Inner products fold in the 4πr² volume factor. Also provides the
// principal-value and shifted-contour oscillatory integrals used everywhere.

#include <Eigen/Dense>

// With EIGEN_USE_LAPACKE, the Eigen include above drags in C99 <complex.h>;
// drop its `I` macro so the constant in common.hpp stays usable.
#ifdef I
#undef I
#endif

#include "oscbath/common.hpp"

namespace oscbath {

struct RadialGrid {
    Eigen::VectorXd nodes;    // strictly increasing, > 0
    Eigen::VectorXd weights;  // positive panel GL weights (plain dr measure)
    double r_max = 30.0;
    int requested_n = 2000;

    int size() const { return static_cast<int>(nodes.size()); }

    // Composite GL panel layout: geometric panels on (r_min, 0.1], uniform
    // panels elsewhere, and geometrically graded panels on both sides of
    // r = 1 down to half-width 1e−5.
    static RadialGrid standard(int n = 2000, double r_max = 30.0, double r_min = 1e-7);
    RadialGrid refined() const { return standard(2 * requested_n, r_max); }
};

struct RadialFn {
    const RadialGrid* grid = nullptr;
    Eigen::VectorXcd values;

    static RadialFn zero(const RadialGrid& g) {
        RadialFn f;
        f.grid = &g;
        f.values = Eigen::VectorXcd::Zero(g.size());
        return f;
    }
    static RadialFn from_profile(const RadialGrid& g, const std::function<Complex(double)>& p) {
        RadialFn f = zero(g);
        for (int i = 0; i < g.size(); ++i) f.values[i] = p(g.nodes[i]);
        return f;
    }
};

// ⟨f|m·g⟩ = 4π Σ w_i r_i² conj(f_i) m(r_i) g_i ; conjugate-linear in f.
Complex inner(const RadialFn& f, const RadialFn& g,
              const std::function<double(double)>& weight);
Complex inner(const RadialFn& f, const RadialFn& g);
double norm(const RadialFn& f);
// ‖|k|^α f‖ = sqrt(4π Σ w r^{2+2α} |f|²).
double norm_alpha(const RadialFn& f, double alpha);

// Diagonal measure weights W_i = 4π w_i r_i² (the 𝔥 inner-product weights).
Eigen::VectorXd measure_weights(const RadialGrid& g);

// PV∫_a^b h(r)/(s−r) dr by singularity subtraction:
//   ∫ (h(r)−h(s))/(s−r) dr + h(s)·ln((s−a)/(b−s)).
double pv_integral(const std::function<double(double)>& h, double s,
                   double a, double b, int panel_order = 20);
Complex pv_integral_c(const std::function<Complex(double)>& h, double s,
                      double a, double b, int panel_order = 20);

// ε-symmetric excision oracle with Richardson ε→0 extrapolation (tests only).
double pv_excision_oracle(const std::function<double(double)>& h, double s,
                          double a, double b);

// ∫_ℝ h(r)e^{itr} dr on the contour Im = shift for t > 0 (t = 0: real line).
// h must be pole-free between the contours; a cheap magnitude scan raises
// ContourPole when the midline blows up.
Complex oscillatory_integral(const std::function<Complex(Complex)>& h, double t,
                             double shift, double half_width,
                             int base_nodes = 4000);

// Composite GL line quadrature of f over [a,b] on Im = height.
Complex line_integral(const std::function<Complex(Complex)>& f, double a, double b,
                      double height, int nodes = 4000);

// Gauss–Legendre nodes/weights on [-1,1] (cached per order).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

} // namespace oscbath
