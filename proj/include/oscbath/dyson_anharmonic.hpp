#pragma once

// Anharmonic perturbation machinery: the finite atomic measure defining the
// potential, its moments, the contour constant κ̃, the admissibility margin,
// the truncated time-ordered (Dyson) expansion of the three-point function,
// the decay-rate probe, and the sine-product bound verifier.

#include "oscbath/equilibrium_correlations.hpp"

namespace oscbath {

struct AtomicMeasure {
    struct Atom {
        double mu = 0.0;
        Complex w{0.0, 0.0};
    };
    std::vector<Atom> atoms;

    // Each atom (μ,w) must be matched by (−μ, conj w).
    bool is_symmetric(double tol = 1e-12) const;
    double moment(int i) const;  // a_i = Σ |w_j|·|μ_j|^i
};

struct DysonConfig {
    int order = 3;              // truncation order N ≤ 4
    double kappa = 0.05;        // contour/decay parameter
    int nodes_low_order = 12;   // per-axis GL nodes for orders ≤ 2
    int nodes_high_order = 8;   // per-axis GL nodes for order ≥ 3
    bool monte_carlo = false;   // uniform sorted-sample fallback for order ≥ 3
    int mc_samples = 20000;
    unsigned mc_seed = 42;
    double plateau_tol = 1e-8;  // stabilization requirement for the baseline run
};

// κ̃ = 2π ∫_ℝ λ²|ρ̂(r+iκ)²(r+iκ)²| / |G(r+iκ)·conj(G(r−iκ))| dr.
double kappa_tilde(const FormFactor& ff, const ModelParams& params, double kappa);

struct AdmissibilityReport {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    double kappa = 0.0, kappa_tilde_val = 0.0;
    double margin = 0.0;  // κ − 2(a₀ + κ̃·a₂) — the predicted decay rate
    bool admissible = false;
};

AdmissibilityReport admissibility(const AtomicMeasure& m, double kappa,
                                  double kappa_tilde_val);

struct DysonResult {
    Complex total{0.0, 0.0};
    std::vector<Complex> order_terms;  // per expansion order 0..N
    bool truncation_warning = false;   // last term not smaller than previous
    double mc_std_error = 0.0;
};

DysonResult dyson_three_point(const TestFunction& f, const TestFunction& g,
                              const TestFunction& h, const AtomicMeasure& m,
                              double t, const DysonConfig& cfg,
                              const ThermalState& st, const SymplecticMap& vmap);

struct AppendixBoundReport {
    int trials = 0;
    int violations = 0;
    double worst_margin = 1e300;  // min over instances of (bound − A(j))
};

// Random instances of the sine-product estimate: computes the tightest α, β
// for a random γ and checks A(j) ≤ e^{−γt_j}|λ_j|α·Π_{k>j}(1+βλ_k²) for all j.
AppendixBoundReport verify_appendix_bound(int trials, int max_n, int max_dim,
                                          unsigned seed);

struct AnharmonicProbe {
    CorrelationSeries series;
    DecayFit fit;
    double margin = 0.0;
    Complex plateau{0.0, 0.0};  // large-t plateau of the f=h=0 baseline run
};

// Runs the truncated series over `times`, estimates the factorized baseline
// from a f=h=0 run (plateau = mean over the last 25% of `baseline_times`),
// and fits the decay rate of |series − baseline| over [fit_lo, fit_hi].
AnharmonicProbe anharmonic_decay_probe(const TestFunction& f, const TestFunction& g,
                                       const TestFunction& h, const AtomicMeasure& m,
                                       const std::vector<double>& times,
                                       const std::vector<double>& baseline_times,
                                       double fit_lo, double fit_hi,
                                       const DysonConfig& cfg, const ThermalState& st,
                                       const SymplecticMap& vmap,
                                       const AdmissibilityReport& adm);

} // namespace oscbath
