#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oscbath/dyson_anharmonic.hpp"

using namespace oscbath;

namespace {

struct Fixture {
    FormFactor ff = make_gaussian();
    ModelParams p;
    RadialGrid grid = RadialGrid::standard(500, 30.0);
    SpectralData sd;
    ScatteringOps ops;
    SymplecticMap vmap;
    ThermalState st;

    Fixture() {
        p = make_model_params(ff, 1.0, 0.1);
        sd = build_spectral_data(ff, p, grid);
        ops = build_scattering_ops(ff, sd, grid);
        vmap = make_symplectic_map(ops, sd, grid);
        st.beta = 1.0;
    }

    RadialFn bump(double rc, double w, double amp) const {
        return RadialFn::from_profile(grid, [=](double r) {
            return amp * std::exp(-0.5 * (r - rc) * (r - rc) / (w * w));
        });
    }
};

const Fixture& fx() {
    static Fixture f;
    return f;
}

// Self-conjugate smooth test functions shared by the series checks.
struct Triple {
    TestFunction f, g, h;
};

Triple triple() {
    const Fixture& F = fx();
    Triple t{TestFunction::zero(F.grid), TestFunction::zero(F.grid),
             TestFunction::zero(F.grid)};
    t.f.c = Complex(0.3, 0.0);
    t.f.f = F.bump(1.0, 0.5, 0.6);
    t.g.c = Complex(-0.2, 0.0);
    t.g.f = F.bump(1.5, 0.7, 0.8);
    t.h.c = Complex(0.1, 0.0);
    t.h.f = F.bump(0.8, 0.4, 0.5);
    return t;
}

} // namespace

TEST_CASE("atomic measure: symmetry predicate and moments") {
    AtomicMeasure m;
    m.atoms = {{1.0, Complex(0.01, 0.02)}, {-1.0, Complex(0.01, -0.02)}};
    CHECK(m.is_symmetric());
    const double aw = std::abs(Complex(0.01, 0.02));
    CHECK(m.moment(0) == doctest::Approx(2.0 * aw).epsilon(1e-14));
    CHECK(m.moment(1) == doctest::Approx(2.0 * aw).epsilon(1e-14));
    CHECK(m.moment(2) == doctest::Approx(2.0 * aw).epsilon(1e-14));

    AtomicMeasure bad;
    bad.atoms = {{1.0, Complex(0.01, 0.02)}, {-1.0, Complex(0.01, 0.02)}};
    CHECK_FALSE(bad.is_symmetric());

    AtomicMeasure scaled;
    scaled.atoms = {{2.0, Complex(0.5, 0.0)}, {-2.0, Complex(0.5, 0.0)}};
    CHECK(scaled.moment(2) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("kappa_tilde: quadratic coupling scaling and independent quadrature") {
    const auto& F = fx();
    const double kt = kappa_tilde(F.ff, F.p, 0.2);
    CHECK(kt > 0.0);

    // λ² prefactor dominates for small coupling.
    const ModelParams half = make_model_params(F.ff, 1.0, 0.05);
    const double kt_half = kappa_tilde(F.ff, half, 0.2);
    CHECK(kt / kt_half == doctest::Approx(4.0).epsilon(0.01));

    // Independent oracle: plain Simpson on a uniform grid (the production code
    // uses graded Gauss panels, so agreement is a genuine cross-check).
    auto integrand = [&](double r) {
        const Complex zp(r, 0.2), zm(r, -0.2);
        const Complex rho = F.ff.eval_complex(zp);
        const Complex gp = g_continuation(F.ff, F.p, zp, 0.5);
        const Complex gm = g_continuation(F.ff, F.p, zm, 0.5);
        return F.p.lambda * F.p.lambda * std::abs(rho * rho * zp * zp) /
               (std::abs(gp) * std::abs(gm));
    };
    const int M = 1200;
    const double a = -12.0, b = 12.0, hstep = (b - a) / M;
    double s = 0.0;
    for (int i = 0; i <= M; ++i) {
        const double c = (i == 0 || i == M) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += c * integrand(a + i * hstep);
    }
    s *= hstep / 3.0 * 2.0 * PI;
    CHECK(std::abs(s - kt) / kt < 1e-6);
}

TEST_CASE("kappa_tilde: guarded error when the contour grazes the resonance") {
    const auto& F = fx();
    // The resonance sits at height ~0.073 for this coupling; a contour nearby
    // drives |G| under the safety threshold.
    CHECK_THROWS_AS(kappa_tilde(F.ff, F.p, 0.08), ResonanceOnContour);
    CHECK_THROWS_AS(kappa_tilde(F.ff, F.p, -0.1), ConfigError);
    CHECK_THROWS_AS(kappa_tilde(F.ff, F.p, 11.9), ContourViolation);
}

TEST_CASE("admissibility arithmetic") {
    AtomicMeasure empty;
    const AdmissibilityReport r0 = admissibility(empty, 0.3, 0.15);
    CHECK(r0.margin == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(r0.admissible);

    AtomicMeasure m;
    m.atoms = {{1.0, Complex(0.01, 0.0)}, {-1.0, Complex(0.01, 0.0)}};
    const AdmissibilityReport r1 = admissibility(m, 0.3, 0.15);
    CHECK(r1.a0 == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(r1.a2 == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(r1.margin == doctest::Approx(0.3 - 2.0 * (0.02 + 0.15 * 0.02)).epsilon(1e-12));
    CHECK(r1.admissible);

    AtomicMeasure heavy;
    heavy.atoms = {{1.0, Complex(0.2, 0.0)}, {-1.0, Complex(0.2, 0.0)}};
    CHECK_FALSE(admissibility(heavy, 0.3, 0.15).admissible);
}

TEST_CASE("empty measure reduces exactly to the unperturbed three-point value") {
    const auto& F = fx();
    const Triple tr = triple();
    DysonConfig cfg;
    cfg.order = 2;
    for (double t : {0.0, 0.8, 1.7}) {
        const DysonResult res =
            dyson_three_point(tr.f, tr.g, tr.h, AtomicMeasure{}, t, cfg, F.st, F.vmap);
        const Complex ref = three_point(tr.f, tr.g, tr.h, t, F.st, F.vmap);
        CHECK(std::abs(res.total - ref) < 1e-15 * std::max(1.0, std::abs(ref)));
        for (std::size_t k = 1; k < res.order_terms.size(); ++k)
            CHECK(std::abs(res.order_terms[k]) == 0.0);
    }
}

TEST_CASE("t = 0 collapses the simplex: perturbation contributes nothing") {
    const auto& F = fx();
    const Triple tr = triple();
    AtomicMeasure m;
    m.atoms = {{1.0, Complex(0.01, 0.0)}, {-1.0, Complex(0.01, 0.0)}};
    DysonConfig cfg;
    cfg.order = 3;
    const DysonResult res = dyson_three_point(tr.f, tr.g, tr.h, m, 0.0, cfg, F.st, F.vmap);
    const Complex ref = three_point(tr.f, tr.g, tr.h, 0.0, F.st, F.vmap);
    CHECK(std::abs(res.total - ref) < 1e-14 * std::abs(ref));
}

TEST_CASE("first-order term matches a central difference in the weight") {
    const auto& F = fx();
    const Triple tr = triple();
    DysonConfig cfg;
    cfg.order = 3;
    const double w = 5e-3, t = 1.3;
    auto eval = [&](double s) {
        AtomicMeasure m;
        m.atoms = {{1.0, Complex(s * w, 0.0)}, {-1.0, Complex(s * w, 0.0)}};
        return dyson_three_point(tr.f, tr.g, tr.h, m, t, cfg, F.st, F.vmap);
    };
    const DysonResult plus = eval(1.0), minus = eval(-1.0);
    // Every order-n term carries n weight factors, so the symmetric difference
    // isolates the odd orders; the residual is the cubic term, ~1e-6 relative.
    const Complex fd = (plus.total - minus.total) / 2.0;
    const Complex o1 = plus.order_terms[1];
    CHECK(std::abs(fd - o1) < 1e-4 * std::abs(o1));
    CHECK(std::abs(o1) > 0.0);
    // Decreasing term hierarchy: the series is asymptotic at this weight.
    CHECK(std::abs(plus.order_terms[2]) < 0.1 * std::abs(plus.order_terms[1]));
    CHECK_FALSE(plus.truncation_warning);
}

TEST_CASE("symmetric measure: atom-order permutation leaves the series unchanged") {
    const auto& F = fx();
    const Triple tr = triple();
    DysonConfig cfg;
    cfg.order = 2;
    AtomicMeasure m, mr;
    m.atoms = {{1.0, Complex(0.008, 0.004)}, {-1.0, Complex(0.008, -0.004)}};
    // Applying (μ, z) → (−μ, conj z) atom-wise maps the symmetric measure onto
    // itself with the atoms listed in the other order.
    mr.atoms = {{-1.0, Complex(0.008, -0.004)}, {1.0, Complex(0.008, 0.004)}};
    CHECK(m.is_symmetric());
    CHECK(mr.is_symmetric());
    const Complex a = dyson_three_point(tr.f, tr.g, tr.h, m, 1.3, cfg, F.st, F.vmap).total;
    const Complex b = dyson_three_point(tr.f, tr.g, tr.h, mr, 1.3, cfg, F.st, F.vmap).total;
    CHECK(std::abs(a - b) < 1e-13 * std::abs(a));
}

TEST_CASE("order outside the supported range is rejected") {
    const auto& F = fx();
    const Triple tr = triple();
    DysonConfig cfg;
    cfg.order = 5;
    CHECK_THROWS_AS(
        dyson_three_point(tr.f, tr.g, tr.h, AtomicMeasure{}, 1.0, cfg, F.st, F.vmap),
        ConfigError);
}

TEST_CASE("Monte-Carlo fallback agrees with quadrature at order 3") {
    const auto& F = fx();
    const Triple tr = triple();
    AtomicMeasure m;
    m.atoms = {{1.0, Complex(0.05, 0.0)}, {-1.0, Complex(0.05, 0.0)}};
    DysonConfig det, mc;
    det.order = 3;
    mc.order = 3;
    mc.monte_carlo = true;
    mc.mc_samples = 4000;
    const DysonResult a = dyson_three_point(tr.f, tr.g, tr.h, m, 1.5, det, F.st, F.vmap);
    const DysonResult b = dyson_three_point(tr.f, tr.g, tr.h, m, 1.5, mc, F.st, F.vmap);
    CHECK(b.mc_std_error > 0.0);
    CHECK(std::abs(a.order_terms[3] - b.order_terms[3]) <
          5.0 * b.mc_std_error + 1e-12);
    // Orders below the fallback threshold stay on the deterministic path.
    CHECK(std::abs(a.order_terms[1] - b.order_terms[1]) == 0.0);
}

TEST_CASE("sine-product bound: no violations on random instances") {
    const AppendixBoundReport rep = verify_appendix_bound(2000, 8, 16, 7);
    CHECK(rep.trials == 2000);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin >= 0.0);

    // n = 1 base case: |sin x| ≤ |x| makes the bound an identity chain.
    const AppendixBoundReport base = verify_appendix_bound(500, 1, 8, 11);
    CHECK(base.violations == 0);
}

TEST_CASE("decay probe: plateau guard fires when the tolerance is unreachable") {
    const auto& F = fx();
    const Triple tr = triple();
    AtomicMeasure m;
    m.atoms = {{1.0, Complex(0.01, 0.0)}, {-1.0, Complex(0.01, 0.0)}};
    DysonConfig cfg;
    cfg.order = 1;
    cfg.plateau_tol = 1e-18;
    const AdmissibilityReport adm = admissibility(m, 0.3, 0.15);
    std::vector<double> times{1.0, 2.0, 3.0, 4.0}, base{2.0, 4.0, 6.0, 8.0, 10.0, 12.0};
    CHECK_THROWS_AS(anharmonic_decay_probe(tr.f, tr.g, tr.h, m, times, base, 1.0, 4.0,
                                           cfg, F.st, F.vmap, adm),
                    PlateauNotReached);
}

TEST_CASE("decay probe: empty measure reproduces the harmonic fit path") {
    const auto& F = fx();
    const Triple tr = triple();
    DysonConfig cfg;
    cfg.order = 1;
    const AdmissibilityReport adm = admissibility(AtomicMeasure{}, 0.3, 0.15);
    std::vector<double> times, base;
    for (double t = 1.0; t <= 8.0; t += 0.5) times.push_back(t);
    for (double t = 2.0; t <= 12.0; t += 1.0) base.push_back(t);
    const AnharmonicProbe probe = anharmonic_decay_probe(
        tr.f, tr.g, tr.h, AtomicMeasure{}, times, base, 2.0, 8.0, cfg, F.st, F.vmap, adm);

    CorrelationSeries direct;
    direct.times = times;
    direct.baseline = probe.series.baseline;
    for (double t : times)
        direct.values.push_back(three_point(tr.f, tr.g, tr.h, t, F.st, F.vmap));
    const DecayFit ref = fit_decay_rate(direct, 2.0, 8.0);
    CHECK(probe.fit.rate == doctest::Approx(ref.rate).epsilon(1e-10));
    CHECK(probe.margin == doctest::Approx(0.3).epsilon(1e-14));
}
