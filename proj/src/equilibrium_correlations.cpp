#include "oscbath/equilibrium_correlations.hpp"

#include <cmath>

namespace oscbath {

namespace {

// coth(x) with a Laurent series near 0: 1/x + x/3 − x³/45 + 2x⁵/945.
template <typename T>
T coth_stable(T x) {
    if (std::abs(x) < 1e-3) {
        const T x2 = x * x;
        return 1.0 / x + x / 3.0 - x * x2 / 45.0 + 2.0 * x * x2 * x2 / 945.0;
    }
    return 1.0 / std::tanh(x);
}

} // namespace

double ThermalState::eta(double r) const { return coth_stable(0.5 * beta * r); }
Complex ThermalState::eta_c(Complex z) const { return coth_stable(0.5 * beta * z); }

Complex thermal_inner(const RadialFn& f, const RadialFn& g, const ThermalState& st) {
    return inner(f, g, [&](double r) { return st.eta(r); });
}

double omega_f(const RadialFn& f, const ThermalState& st) {
    const double e = thermal_inner(f, f, st).real();
    if (!std::isfinite(e)) throw DivergentThermalNorm("thermal norm diverges");
    return std::exp(-0.25 * e);
}

double omega_interacting(const TestFunction& tf, const ThermalState& st,
                         const SymplecticMap& vmap) {
    return omega_f(vmap.v_map(tf), st);
}

Complex gibbs_particle_char(Complex c, const ModelParams& params, double beta) {
    const double alpha = std::sqrt(1.0 + params.lambda * params.lambda * params.norm_sq);
    const double weight = coth_stable(0.5 * beta * alpha);
    const double quad = c.real() * c.real() / alpha + c.imag() * c.imag() * alpha;
    return std::exp(-0.25 * weight * quad);
}

Complex gaussian_three_point(const RadialFn& v1, const RadialFn& u, const RadialFn& v3,
                             double t, const ThermalState& st) {
    RadialFn sum13 = v1;
    sum13.values = v1.values + v3.values;
    RadialFn diff13 = v1;
    diff13.values = v1.values - v3.values;
    RadialFn ut = u;
    for (int i = 0; i < u.grid->size(); ++i)
        ut.values[i] *= std::exp(I * t * u.grid->nodes[i]);

    const Complex w13 = std::exp(Complex(-0.25 * thermal_inner(sum13, sum13, st).real(),
                                         -0.5 * inner(v1, v3).imag()));
    const double wu = omega_f(u, st);
    const Complex cross = std::exp(Complex(-0.5 * thermal_inner(sum13, ut, st).real(),
                                           -0.5 * inner(diff13, ut).imag()));
    return w13 * wu * cross;
}

Complex three_point(const TestFunction& f1, const TestFunction& f2,
                    const TestFunction& f3, double t, const ThermalState& st,
                    const SymplecticMap& vmap) {
    return gaussian_three_point(vmap.v_map(f1), vmap.v_map(f2), vmap.v_map(f3), t, st);
}

Complex three_point_baseline(const TestFunction& f1, const TestFunction& f2,
                             const TestFunction& f3, const ThermalState& st,
                             const SymplecticMap& vmap) {
    const RadialFn v1 = vmap.v_map(f1), v2 = vmap.v_map(f2), v3 = vmap.v_map(f3);
    RadialFn sum13 = v1;
    sum13.values = v1.values + v3.values;
    const Complex w13 = std::exp(Complex(-0.25 * thermal_inner(sum13, sum13, st).real(),
                                         -0.5 * inner(v1, v3).imag()));
    return w13 * omega_f(v2, st);
}

CrossSection decay_cross_section(const AnalyticTestFunction& f,
                                 const AnalyticTestFunction& g, double t,
                                 const ThermalState& st, double kappa_shift) {
    if (kappa_shift <= 0.0 || kappa_shift >= 2.0 * PI / st.beta)
        throw ContourPole("contour shift must stay below the first thermal pole");
    CrossSection cs;

    // Path (i): direct radial quadrature of the exact strip-analytic elements.
    {
        const RadialFn& F = f.r_element;
        const RadialFn& G = g.r_element;
        RadialFn Gt = G;
        for (int i = 0; i < G.grid->size(); ++i)
            Gt.values[i] *= std::exp(I * t * G.grid->nodes[i]);
        cs.re_grid = thermal_inner(F, Gt, st).real();
        cs.im_grid = inner(F, Gt).imag();
    }

    // Path (ii): contour representation over the reflected line.
    const double a = f.a, b = f.b, ap = g.a, bp = g.b;
    auto htilde = [&](Complex z) { return 4.0 * PI * f.profile.eval(z) * g.profile.eval(z); };
    auto poly = [&](Complex z) {
        return (a * ap * z * z * z + b * bp * z) + I * (ap * b - a * bp) * z * z;
    };
    const double L = 30.0;
    cs.re_contour =
        (0.5 * oscillatory_integral(
                   [&](Complex z) { return poly(z) * st.eta_c(z) * htilde(z); }, t,
                   kappa_shift, L))
            .real();
    cs.im_contour =
        (-0.5 * I *
         oscillatory_integral([&](Complex z) { return poly(z) * htilde(z); }, t,
                              kappa_shift, L))
            .real();
    return cs;
}

DecayFit fit_decay_rate(const CorrelationSeries& series, double t_lo, double t_hi) {
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t < t_lo || t > t_hi) continue;
        const double d = std::abs(series.values[i] - series.baseline);
        if (d <= 1e-13) continue;  // noise floor
        ts.push_back(t);
        ys.push_back(std::log(d));
    }
    if (ts.size() < 5) throw NoiseFloor("not enough points above the noise floor");

    const std::size_t n = ts.size();
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        st += ts[i];
        sy += ys[i];
        stt += ts[i] * ts[i];
        sty += ts[i] * ys[i];
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double icept = (sy - slope * st) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = icept + slope * ts[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    DecayFit fit;
    fit.rate = -slope;
    fit.prefactor = std::exp(icept);
    fit.r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

} // namespace oscbath
