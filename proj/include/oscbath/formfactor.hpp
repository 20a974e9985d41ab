#pragma once

// Coupling form factors ρ̂ for the oscillator–bath model: positive, even,
// analytic on a strip around the real axis. Default family is the Gaussian
// ρ̂(r) = A·exp(−r²/(2σ²)), which is entire; its strip_half_width is a
// declared working strip, not an analyticity bound.

#include <map>
#include <optional>

#include "oscbath/common.hpp"

namespace oscbath {

struct FormFactor {
    enum class Family { Gaussian, Custom };

    Family family = Family::Gaussian;
    double sigma = 1.0;      // Gaussian scale σ > 0
    double amplitude = 1.0;  // Gaussian amplitude A > 0
    double strip_half_width = 12.0;
    // Custom analytic radial profile; must be even and positive on (0,∞).
    std::optional<std::function<Complex(Complex)>> custom;

    Complex eval_complex(Complex z) const;
    double eval(double r) const { return eval_complex(Complex(r, 0.0)).real(); }
};

FormFactor make_gaussian(double sigma = 1.0, double amplitude = 1.0,
                         double strip_half_width = 12.0);

struct ModelParams {
    double beta = 1.0;
    double lambda = 0.1;
    double norm_sq = 0.0;  // ‖|k|⁻¹ρ̂‖² = 4π∫₀^∞ ρ̂² dr
    double R = 0.0;        // (λ²/2)·norm_sq
    std::map<double, double> weighted_norms;  // α → 4π∫ r^{2+2α} ρ̂² dr
};

// Adaptive quadrature of a real integrand over [a,b] (Gauss–Kronrod style
// panel bisection); rel_tol is a relative target against the running total.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, int max_depth = 40);

// norm_sq plus the weighted norms for α ∈ {−1, −1/2, 0, 1/2}.
std::pair<double, std::map<double, double>> coupling_norms(const FormFactor& ff);

ModelParams make_model_params(const FormFactor& ff, double beta, double lambda);

struct HypothesisClause {
    std::string name;
    bool pass = false;
    double value = 0.0;  // computed integral / sample statistic
};

struct HypothesisReport {
    std::vector<HypothesisClause> clauses;
    bool all_pass() const {
        for (const auto& c : clauses)
            if (!c.pass) return false;
        return true;
    }
};

// Positivity on a sample grid, evenness, strip coverage vs 2π/β, and
// finiteness of ∫|ρ̂(r+is)|²(1+|r|³)dr at s ∈ {0, ±2π/β} plus a midline.
// The boundary-dominates assumption makes this a heuristic check.
HypothesisReport verify_hypothesis(const FormFactor& ff, double beta);

} // namespace oscbath
