#include "oscbath/symplectic_dynamics.hpp"

#include <cmath>

namespace oscbath {

SymplecticMap make_symplectic_map(const ScatteringOps& ops, const SpectralData& sd,
                                  const RadialGrid& grid) {
    SymplecticMap m;
    m.ops = &ops;
    m.sd = &sd;
    m.grid = &grid;
    m.wp_bar_adj = ops.Wplus_bar_adj.matrix;
    m.wm_bar_adj = ops.Wminus_bar_adj.matrix;
    m.qp_bar = sd.q_plus.values.conjugate();
    m.qm_bar = sd.q_minus.values.conjugate();
    return m;
}

RadialFn SymplecticMap::v_map(const TestFunction& tf) const {
    RadialFn out = RadialFn::zero(*grid);
    out.values = wp_bar_adj * tf.f.values + tf.c * qp_bar -
                 wm_bar_adj * tf.f.values.conjugate() - std::conj(tf.c) * qm_bar;
    return out;
}

TestFunction SymplecticMap::v_inverse(const RadialFn& g) const {
    RadialFn qpb = RadialFn::zero(*grid), qmc = RadialFn::zero(*grid);
    qpb.values = qp_bar;
    qmc.values = sd->q_minus.values;
    RadialFn gbar = g;
    gbar.values = g.values.conjugate();

    TestFunction tf = TestFunction::zero(*grid);
    tf.c = inner(qpb, g) + inner(qmc, gbar);
    tf.f.values = ops->Wplus_bar.matrix * g.values + ops->Wminus.matrix * gbar.values;
    return tf;
}

TestFunction SymplecticMap::w_t_of_image(const RadialFn& u, double t) const {
    RadialFn m = u;
    for (int i = 0; i < grid->size(); ++i)
        m.values[i] *= std::exp(I * t * grid->nodes[i]);

    RadialFn qpb = RadialFn::zero(*grid), qmb = RadialFn::zero(*grid);
    qpb.values = qp_bar;
    qmb.values = qm_bar;

    TestFunction out = TestFunction::zero(*grid);
    out.c = inner(qpb, m) + inner(m, qmb);
    out.f.values = ops->Wplus_bar.matrix * m.values +
                   ops->Wminus.matrix * m.values.conjugate();
    return out;
}

TestFunction SymplecticMap::w_t(const TestFunction& tf, double t) const {
    return w_t_of_image(v_map(tf), t);
}

double symplectic_form(const TestFunction& x, const TestFunction& y) {
    return (std::conj(x.c) * y.c).imag() + symplectic_form(x.f, y.f);
}

double symplectic_form(const RadialFn& x, const RadialFn& y) {
    return inner(x, y).imag();
}

double plus_norm(const TestFunction& x) {
    return std::abs(x.c) + norm(x.f) + norm_alpha(x.f, -0.5);
}

Complex AnalyticProfile::eval(Complex z) const {
    const Complex gauss = amp * std::exp(-z * z / (2.0 * sigma * sigma));
    switch (kind) {
        case Kind::Gaussian:
            return gauss;
        case Kind::GaussianLorentz:
            return gauss * (pole * pole) / (z * z + pole * pole);
        case Kind::GaussianPoly:
            return gauss * std::pow(z * z, degree);
    }
    return gauss;
}

AnalyticTestFunction make_analytic(double a, double b, const AnalyticProfile& profile,
                                   const SymplecticMap& vmap, double kappa) {
    // Conjugate reflection rule f̃(−r) = conj(f̃(r)) on strip samples.
    for (int i = 1; i <= 50; ++i) {
        const Complex z(0.3 * i, 0.5 * kappa);
        const Complex lhs = profile.eval(-z);
        const Complex rhs = std::conj(profile.eval(std::conj(z)));
        if (std::abs(lhs - rhs) > 1e-10 * (1.0 + std::abs(rhs)))
            throw ReflectionViolation("profile violates the conjugate reflection rule");
    }
    // Sampled strip-integrability: ∫|f̃(r+iη)|²(1+|r|³)dr finite at 5 heights.
    for (int k = 0; k <= 4; ++k) {
        const double h = kappa * (0.2 * k + 0.1);
        const double val = integrate_adaptive(
            [&](double r) {
                return std::norm(profile.eval(Complex(r, h))) *
                       (1.0 + std::abs(r) * std::abs(r) * std::abs(r));
            },
            -30.0, 30.0, 1e-8);
        if (!std::isfinite(val))
            throw ReflectionViolation("strip integral not finite at sampled height");
    }

    AnalyticTestFunction atf;
    atf.a = a;
    atf.b = b;
    atf.profile = profile;
    const RadialGrid& grid = *vmap.grid;
    atf.r_element = RadialFn::from_profile(grid, [&](double r) {
        const Complex p = profile.eval(Complex(r, 0.0));
        return (I * a * std::sqrt(r) + b / std::sqrt(r)) * p;
    });
    atf.preimage = vmap.v_inverse(atf.r_element);
    return atf;
}

} // namespace oscbath
