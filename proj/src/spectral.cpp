#include "oscbath/spectral.hpp"

#include <cmath>

namespace oscbath {

Complex d_of_z(const FormFactor& ff, const ModelParams& p, Complex z) {
    if (std::abs(z.imag()) < 1e-12 && z.real() >= -1e-12)
        throw CutViolation("d_of_z evaluated on the cut [0,inf)");
    const double rmax = 30.0 * ff.sigma;
    const double lam2 = p.lambda * p.lambda;
    auto integrand = [&](double r) {
        const double rho = ff.eval(r);
        return rho * rho * r * r / (z - r * r);
    };
    const Complex integral =
        Complex(integrate_adaptive([&](double r) { return integrand(r).real(); }, 0.0, rmax, 1e-12),
                integrate_adaptive([&](double r) { return integrand(r).imag(); }, 0.0, rmax, 1e-12));
    return -z + 1.0 + lam2 * p.norm_sq + lam2 * 4.0 * PI * integral;
}

Complex d_plus(const FormFactor& ff, const ModelParams& p, double s) {
    if (s < 0.0) throw ConfigError("d_plus needs s >= 0");
    const double rmax = 30.0 * ff.sigma;
    const double lam2 = p.lambda * p.lambda;
    const double rs = std::sqrt(s);
    double integral;
    if (rs <= 1e-12 || rs >= rmax) {
        integral = integrate_adaptive(
            [&](double r) {
                const double rho = ff.eval(r);
                return rho * rho * r * r / (s - r * r);
            },
            0.0, rmax, 1e-12);
    } else {
        // 1/(s−r²) = 1/((√s+r)(√s−r)): PV with pole at r = √s.
        integral = pv_integral(
            [&](double r) {
                const double rho = ff.eval(r);
                return rho * rho * r * r / (rs + r);
            },
            rs, 0.0, rmax);
    }
    const double rho_rs = ff.eval(rs);
    const double im = -lam2 * 2.0 * PI * PI * rs * rho_rs * rho_rs;
    return Complex(-s + 1.0 + lam2 * p.norm_sq + lam2 * 4.0 * PI * integral, im);
}

namespace {

Complex contour_term(const FormFactor& ff, Complex z, double eta, double L) {
    // ∫ ρ̂²(w)·w/(z−w) dr on the line w = r + iη.
    auto f = [&](Complex w) {
        const Complex rho = ff.eval_complex(w);
        return rho * rho * w / (z - w);
    };
    return 0.5 * (line_integral(f, -L, L, eta, 6000) + line_integral(f, -L, L, -eta, 6000));
}

} // namespace

Complex g_continuation(const FormFactor& ff, const ModelParams& p, Complex z,
                       double eta) {
    if (eta <= 0.0 || eta >= ff.strip_half_width)
        throw ContourViolation("contour height outside the strip");
    if (std::abs(z.imag()) >= eta)
        throw ContourViolation("evaluation point not between the contours");
    const double lam2 = p.lambda * p.lambda;
    const Complex rho = ff.eval_complex(z);
    const double L = 30.0 * ff.sigma;
    return -z * z + 1.0 + lam2 * p.norm_sq + 4.0 * PI * PI * I * lam2 * rho * rho * z +
           2.0 * PI * lam2 * contour_term(ff, z, eta, L);
}

Complex kappa2_closed_form(const FormFactor& ff, const ModelParams& p) {
    const double rmax = 30.0 * ff.sigma;
    // PV∫ ρ̂²(r)·r/(1−r) dr over ℝ, pole at r = 1.
    const double pv = pv_integral(
        [&](double r) {
            const double rho = ff.eval(r);
            return rho * rho * r;
        },
        1.0, -rmax, rmax);
    const double rho1 = ff.eval(1.0);
    return 0.5 * Complex(p.norm_sq + 2.0 * PI * pv, 4.0 * PI * PI * rho1 * rho1);
}

ResonanceResult find_resonance(const FormFactor& ff, const ModelParams& p, double eta) {
    auto G = [&](Complex z) { return g_continuation(ff, p, z, eta); };
    const double lam2 = p.lambda * p.lambda;
    Complex z = 1.0 + lam2 * kappa2_closed_form(ff, p);
    if (p.lambda == 0.0) return {Complex(1.0, 0.0), 0.0, 0};

    const double h = 1e-6;
    int iters = 0;
    for (; iters < 80; ++iters) {
        const Complex g0 = G(z);
        if (std::abs(g0) < 1e-13) break;
        const Complex dg = (G(z + h) - G(z - h)) / (2.0 * h);
        Complex step = g0 / dg;
        // Damping: halve until the residual decreases.
        double scale = 1.0;
        while (scale > 1e-3 && std::abs(G(z - scale * step)) > std::abs(g0)) scale *= 0.5;
        z -= scale * step;
        if (std::abs(scale * step) < 1e-14) break;
    }
    double res = std::abs(G(z));
    if (res > 1e-10) {
        // Muller fallback from three points around the perturbative seed.
        Complex x0 = 1.0 + lam2 * kappa2_closed_form(ff, p);
        Complex x1 = x0 * Complex(1.0, 1e-3), x2 = x0 * Complex(1.0, -1e-3);
        Complex f0 = G(x0), f1 = G(x1), f2 = G(x2);
        for (int it = 0; it < 60; ++it) {
            const Complex q = (x0 - x1) / (x1 - x2);
            const Complex a = q * f0 - q * (1.0 + q) * f1 + q * q * f2;
            const Complex b = (2.0 * q + 1.0) * f0 - (1.0 + q) * (1.0 + q) * f1 + q * q * f2;
            const Complex c = (1.0 + q) * f0;
            const Complex disc = std::sqrt(b * b - 4.0 * a * c);
            const Complex den = (std::abs(b + disc) > std::abs(b - disc)) ? b + disc : b - disc;
            const Complex xn = x0 - (x0 - x1) * 2.0 * c / den;
            x2 = x1; f2 = f1;
            x1 = x0; f1 = f0;
            x0 = xn; f0 = G(x0);
            if (std::abs(f0) < 1e-13) break;
        }
        if (std::abs(f0) < res) { z = x0; res = std::abs(f0); }
        if (res > 1e-10) throw NoConvergence("resonance search residual " + std::to_string(res));
    }
    return {z, res, iters};
}

int winding_number(const FormFactor& ff, const ModelParams& p,
                   double x0, double x1, double y0, double y1, double eta, int per_edge) {
    auto G = [&](Complex z) { return g_continuation(ff, p, z, eta); };
    std::vector<Complex> path;
    path.reserve(static_cast<std::size_t>(4 * per_edge));
    for (int i = 0; i < per_edge; ++i) path.emplace_back(x0 + (x1 - x0) * i / per_edge, y0);
    for (int i = 0; i < per_edge; ++i) path.emplace_back(x1, y0 + (y1 - y0) * i / per_edge);
    for (int i = 0; i < per_edge; ++i) path.emplace_back(x1 - (x1 - x0) * i / per_edge, y1);
    for (int i = 0; i < per_edge; ++i) path.emplace_back(x0, y1 - (y1 - y0) * i / per_edge);

    std::vector<Complex> vals(path.size());
    parallel_for(path.size(), [&](std::size_t i) { vals[i] = G(path[i]); });
    double total = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const Complex a = vals[i], b = vals[(i + 1) % vals.size()];
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * PI)));
}

SpectralData build_spectral_data(const FormFactor& ff, const ModelParams& p,
                                 const RadialGrid& grid) {
    SpectralData sd;
    sd.params = p;
    const int n = grid.size();
    sd.d_plus_vals.resize(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        const double r = grid.nodes[static_cast<int>(i)];
        sd.d_plus_vals[i] = d_plus(ff, p, r * r);
    });

    sd.q = RadialFn::zero(grid);
    sd.q_plus = RadialFn::zero(grid);
    sd.q_minus = RadialFn::zero(grid);
    double infd = 1e300;
    for (int i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        const Complex dp = sd.d_plus_vals[static_cast<std::size_t>(i)];
        infd = std::min(infd, std::abs(dp));
        const Complex q = -p.lambda * ff.eval(r) / dp;
        sd.q.values[i] = q;
        const double sr = std::sqrt(r);
        sd.q_plus.values[i] = 0.5 * (sr + 1.0 / sr) * q;
        sd.q_minus.values[i] = 0.5 * (sr - 1.0 / sr) * q;
    }
    sd.inf_dplus = infd;
    sd.q_norm = norm(sd.q);
    if (p.lambda != 0.0) {
        const ResonanceResult rr = find_resonance(ff, p);
        sd.kappa_hat = rr.kappa_hat;
        sd.resonance_residual = rr.residual;
    }
    return sd;
}

} // namespace oscbath
