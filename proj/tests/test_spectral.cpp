#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oscbath/spectral.hpp"

using namespace oscbath;

namespace {

const FormFactor& ff() {
    static FormFactor f = make_gaussian();
    return f;
}

ModelParams params(double lambda) { return make_model_params(ff(), 1.0, lambda); }

} // namespace

TEST_CASE("dispersion function: free case is 1 - z") {
    const ModelParams p = params(0.0);
    for (Complex z : {Complex(-1.0, 0.0), Complex(0.5, 0.7), Complex(2.0, -1.0)}) {
        CHECK(std::abs(d_of_z(ff(), p, z) - (1.0 - z)) < 1e-12);
    }
}

TEST_CASE("dispersion function at z=-1 matches a brute-force quadrature") {
    const ModelParams p = params(0.1);
    const Complex v = d_of_z(ff(), p, Complex(-1.0, 0.0));
    CHECK(std::abs(v.imag()) < 1e-12);
    const double tail = integrate_adaptive(
        [](double r) {
            return std::exp(-r * r) * r * r / (-1.0 - r * r);
        },
        0.0, 30.0, 1e-12);
    const double oracle = 1.0 + 1.0 + p.lambda * p.lambda * p.norm_sq +
                          p.lambda * p.lambda * 4.0 * PI * tail;
    CHECK(v.real() == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("dispersion function: reflection symmetry") {
    const ModelParams p = params(0.15);
    for (Complex z : {Complex(0.4, 0.6), Complex(-2.0, 1.5), Complex(1.2, -0.3)}) {
        CHECK(std::abs(d_of_z(ff(), p, std::conj(z)) - std::conj(d_of_z(ff(), p, z))) <
              1e-12);
    }
}

TEST_CASE("dispersion function: evaluation on the cut throws") {
    CHECK_THROWS_AS((void)d_of_z(ff(), params(0.1), Complex(2.0, 0.0)), CutViolation);
}

TEST_CASE("boundary value: free case and Fermi-golden-rule imaginary part") {
    const ModelParams p0 = params(0.0);
    const Complex free = d_plus(ff(), p0, 0.7);
    CHECK(std::abs(free - Complex(0.3, 0.0)) < 1e-12);

    const ModelParams p = params(0.1);
    const Complex v = d_plus(ff(), p, 1.0);
    const double im_oracle = -0.01 * 2.0 * PI * PI * std::exp(-1.0);
    CHECK(v.imag() == doctest::Approx(im_oracle).epsilon(1e-12));
}

TEST_CASE("boundary value agrees with the epsilon-limit of the dispersion function") {
    const ModelParams p = params(0.1);
    const double s = 1.3;
    const Complex v = d_plus(ff(), p, s);
    // Richardson in ε: D(s+iε) = D₊(s) + c·ε + O(ε²)
    const Complex a = d_of_z(ff(), p, Complex(s, 1e-3));
    const Complex b = d_of_z(ff(), p, Complex(s, 5e-4));
    const Complex extrap = 2.0 * b - a;
    CHECK(std::abs(v - extrap) < 1e-5);
}

TEST_CASE("strip continuation: free case is 1 - z^2") {
    const ModelParams p = params(0.0);
    for (Complex z : {Complex(0.9, 0.02), Complex(1.1, -0.03)}) {
        CHECK(std::abs(g_continuation(ff(), p, z) - (1.0 - z * z)) < 1e-10);
    }
}

TEST_CASE("strip continuation: contour-height independence") {
    const ModelParams p = params(0.1);
    const Complex z(1.05, 0.04);
    const Complex a = g_continuation(ff(), p, z, 0.25);
    const Complex b = g_continuation(ff(), p, z, 0.40);
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("strip continuation: even in the coupling on 100 random strip points") {
    const ModelParams pp = params(0.12);
    ModelParams pm = pp;
    pm.lambda = -0.12;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ur(0.3, 1.7), ui(-0.08, 0.08);
    for (int i = 0; i < 100; ++i) {
        const Complex z(ur(rng), ui(rng));
        const Complex a = g_continuation(ff(), pp, z);
        const Complex b = g_continuation(ff(), pm, z);
        CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("strip continuation matches the boundary value on the real axis") {
    const ModelParams p = params(0.1);
    for (double s : {0.8, 1.0, 1.44}) {
        const Complex dp = d_plus(ff(), p, s);
        const Complex gc = g_continuation(ff(), p, Complex(std::sqrt(s), 0.0));
        CHECK(std::abs(gc.real() - dp.real()) < 1e-8);
        // fixed ratio of the imaginary parts under the two-contour average
        CHECK(gc.imag() == doctest::Approx(-2.0 * dp.imag()).epsilon(1e-6));
    }
}

TEST_CASE("second-order resonance coefficient: frozen oracle") {
    const ModelParams p = params(0.1);
    const Complex k2 = kappa2_closed_form(ff(), p);
    // Frozen independently computed values for the default gaussian coupling.
    CHECK(k2.real() == doctest::Approx(5.992406).epsilon(1e-6));
    CHECK(k2.imag() == doctest::Approx(7.261649).epsilon(1e-6));
    CHECK(k2.imag() == doctest::Approx(2.0 * PI * PI * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("resonance: free case sits at 1") {
    const ResonanceResult r = find_resonance(ff(), params(0.0));
    CHECK(std::abs(r.kappa_hat - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("resonance: residual, upper-half location, coupling evenness") {
    const ResonanceResult rp = find_resonance(ff(), params(0.1));
    CHECK(rp.residual < 1e-10);
    CHECK(rp.kappa_hat.imag() > 0.0);
    CHECK(rp.kappa_hat.real() > 1.0);

    ModelParams pm = params(0.1);
    pm.lambda = -0.1;
    const ResonanceResult rm = find_resonance(ff(), pm);
    CHECK(std::abs(rp.kappa_hat - rm.kappa_hat) < 1e-10);
}

TEST_CASE("resonance: perturbative seed accuracy at small coupling") {
    const ModelParams p = params(0.05);
    const ResonanceResult r = find_resonance(ff(), p);
    const Complex k2 = kappa2_closed_form(ff(), p);
    const Complex pert = 1.0 + p.lambda * p.lambda * k2;
    CHECK(std::abs(r.kappa_hat - pert) < 50.0 * std::pow(p.lambda, 4));
}

TEST_CASE("winding count: one zero inside the scan rectangle, none elsewhere") {
    const ModelParams p = params(0.1);
    const ResonanceResult r = find_resonance(ff(), p);
    const double yi = r.kappa_hat.imag();
    CHECK(winding_number(ff(), p, 0.2, 1.8, 0.2 * yi, 3.0 * yi) == 1);
    CHECK(winding_number(ff(), p, 1.5, 1.8, 0.2 * yi, 3.0 * yi) == 0);
}

TEST_CASE("spectral data: unit norm, pointwise definition, component algebra") {
    const RadialGrid g = RadialGrid::standard(2000, 30.0);
    for (double lam : {0.05, 0.1, 0.2}) {
        const ModelParams p = params(lam);
        const SpectralData sd = build_spectral_data(ff(), p, g);
        CHECK(std::abs(sd.q_norm - 1.0) < 1e-6);
        CHECK(sd.inf_dplus > 0.0);
        CHECK(sd.resonance_residual < 1e-10);
        for (int i : {0, 500, 1000, 1500}) {
            const double r = g.nodes[i];
            const Complex q_direct = -lam * ff().eval(r) / sd.d_plus_vals[i];
            CHECK(std::abs(sd.q.values[i] - q_direct) < 1e-12);
            const Complex sum = sd.q_plus.values[i] + sd.q_minus.values[i];
            const Complex diff = sd.q_plus.values[i] - sd.q_minus.values[i];
            CHECK(std::abs(sum - std::sqrt(r) * sd.q.values[i]) < 1e-12);
            CHECK(std::abs(diff - sd.q.values[i] / std::sqrt(r)) < 1e-12);
        }
    }
}

TEST_CASE("spectral data: unit norm tightens under refinement") {
    const ModelParams p = params(0.1);
    const RadialGrid g1 = RadialGrid::standard(1000, 30.0);
    const RadialGrid g2 = RadialGrid::standard(2000, 30.0);
    const double e1 = std::abs(build_spectral_data(ff(), p, g1).q_norm - 1.0);
    const double e2 = std::abs(build_spectral_data(ff(), p, g2).q_norm - 1.0);
    CHECK(e2 <= std::max(2.0 * e1, 1e-12));
}
