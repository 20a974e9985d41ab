#pragma once

// Dispersion analysis: the function D(z), its boundary value D₊ on the cut,
// the strip continuation G(z,λ) used for resonance hunting, and the derived
// functions Q, Q± on the grid.
//
// Convention note: g_continuation uses the symmetrized two-contour average
// (half the sum of the lines Im = ±η). That average is η-independent, agrees
// with Re D₊ on the real axis, and its zero κ̂(λ) carries the second-order
// coefficient κ₂ with Im κ₂ = 2π²ρ̂²(1) — the Fermi-golden-rule width that the
// rest of the library (decay rates, contour shifts) is calibrated against.
// On the real axis Im G = −2·Im D₊ (fixed ratio; see the consistency test).

#include "oscbath/formfactor.hpp"
#include "oscbath/radial_numerics.hpp"

namespace oscbath {

struct SpectralData {
    ModelParams params;
    std::vector<Complex> d_plus_vals;  // D₊(r_j²) per node
    RadialFn q, q_plus, q_minus;
    Complex kappa_hat{1.0, 0.0};
    double q_norm = 0.0;
    double inf_dplus = 0.0;
    double resonance_residual = 0.0;
};

// D(z) = −z + 1 + λ²·norm_sq + λ²·4π∫ ρ̂(r)² r²/(z−r²) dr, z off [0,∞).
Complex d_of_z(const FormFactor& ff, const ModelParams& p, Complex z);

// Boundary value from above at energy s ≥ 0 (Sokhotski–Plemelj split):
// Re via principal value, Im = −λ²·2π²·√s·ρ̂(√s)².
Complex d_plus(const FormFactor& ff, const ModelParams& p, double s);

// Strip continuation (symmetrized two-contour average); needs |Im z| < eta.
Complex g_continuation(const FormFactor& ff, const ModelParams& p, Complex z,
                       double eta = 0.5);

// Closed-form second-order resonance coefficient
// κ₂ = ½(norm_sq + 2π PV∫ρ̂²(r)r/(1−r)dr + 4π²ρ̂²(1)i).
Complex kappa2_closed_form(const FormFactor& ff, const ModelParams& p);

struct ResonanceResult {
    Complex kappa_hat;
    double residual;
    int iterations;
};

// Damped Newton (central-difference derivative) from the perturbative seed
// 1 + λ²κ₂, with a Muller fallback.
ResonanceResult find_resonance(const FormFactor& ff, const ModelParams& p,
                               double eta = 0.5);

// Winding number of G around the rectangle [x0,x1]×[y0,y1] (zero count).
int winding_number(const FormFactor& ff, const ModelParams& p,
                   double x0, double x1, double y0, double y1,
                   double eta = 0.5, int per_edge = 400);

SpectralData build_spectral_data(const FormFactor& ff, const ModelParams& p,
                                 const RadialGrid& grid);

} // namespace oscbath
