#include "oscbath/formfactor.hpp"

#include <array>
#include <cmath>

namespace oscbath {

Complex FormFactor::eval_complex(Complex z) const {
    if (std::abs(z.imag()) > strip_half_width + 1e-15)
        throw StripViolation("form factor evaluated outside its strip");
    if (family == Family::Custom) {
        if (!custom) throw ConfigError("custom form factor has no profile");
        return (*custom)(z);
    }
    return amplitude * std::exp(-z * z / (2.0 * sigma * sigma));
}

FormFactor make_gaussian(double sigma, double amplitude, double strip_half_width) {
    if (sigma <= 0.0 || amplitude <= 0.0)
        throw ConfigError("gaussian form factor needs sigma > 0 and amplitude > 0");
    FormFactor ff;
    ff.family = FormFactor::Family::Gaussian;
    ff.sigma = sigma;
    ff.amplitude = amplitude;
    ff.strip_half_width = strip_half_width;
    return ff;
}

namespace {

// 15-point Gauss–Kronrod pair (7-point Gauss embedded) on [-1,1].
constexpr std::array<double, 15> kronrod_x = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,               0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr std::array<double, 15> kronrod_w = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr std::array<double, 7> gauss_w = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelEval {
    double value;
    double err;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * kronrod_x[i]);
        k += kronrod_w[i] * v;
        if (i % 2 == 1) g += gauss_w[i / 2] * v;
    }
    return {k * h, std::abs(k - g) * h};
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, int depth, int max_depth) {
    const PanelEval whole = gk15(f, a, b);
    if (whole.err <= abs_tol || depth >= max_depth) {
        if (depth >= max_depth && whole.err > 1e3 * abs_tol)
            throw QuadratureDivergence("adaptive quadrature failed to converge");
        return whole.value;
    }
    const double m = 0.5 * (a + b);
    return adaptive_rec(f, a, m, 0.5 * abs_tol, depth + 1, max_depth) +
           adaptive_rec(f, m, b, 0.5 * abs_tol, depth + 1, max_depth);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    const PanelEval first = gk15(f, a, b);
    const double scale = std::max(std::abs(first.value), 1e-300);
    return adaptive_rec(f, a, b, rel_tol * scale, 0, max_depth);
}

std::pair<double, std::map<double, double>> coupling_norms(const FormFactor& ff) {
    const double rmax = 30.0 * ff.sigma;
    auto weighted = [&](double alpha) {
        return 4.0 * PI *
               integrate_adaptive(
                   [&](double r) {
                       const double rho = ff.eval(r);
                       return std::pow(r, 2.0 + 2.0 * alpha) * rho * rho;
                   },
                   1e-12, rmax, 1e-12);
    };
    std::map<double, double> norms;
    for (double alpha : {-1.0, -0.5, 0.0, 0.5}) norms[alpha] = weighted(alpha);
    return {norms.at(-1.0), norms};
}

ModelParams make_model_params(const FormFactor& ff, double beta, double lambda) {
    if (beta <= 0.0) throw ConfigError("beta must be positive");
    ModelParams p;
    p.beta = beta;
    p.lambda = lambda;
    auto [nsq, norms] = coupling_norms(ff);
    p.norm_sq = nsq;
    p.weighted_norms = std::move(norms);
    p.R = 0.5 * lambda * lambda * p.norm_sq;
    return p;
}

HypothesisReport verify_hypothesis(const FormFactor& ff, double beta) {
    HypothesisReport rep;

    // Positivity of ρ̂ on (0, 30σ].
    {
        double minval = 1e300;
        for (int i = 1; i <= 400; ++i) minval = std::min(minval, ff.eval(30.0 * ff.sigma * i / 400.0));
        rep.clauses.push_back({"positivity", minval > 0.0, minval});
    }
    // Evenness of the real-line continuation.
    {
        double maxdev = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double r = 0.05 * i;
            maxdev = std::max(maxdev,
                              std::abs(ff.eval_complex(Complex(r, 0)) - ff.eval_complex(Complex(-r, 0))));
        }
        rep.clauses.push_back({"evenness", maxdev < 1e-13, maxdev});
    }
    // Declared strip must cover the thermal strip |Im z| ≤ 2π/β.
    const double s_max = 2.0 * PI / beta;
    rep.clauses.push_back({"strip_coverage", ff.strip_half_width >= s_max, ff.strip_half_width});

    // Weighted strip integral at heights {0, ±2π/β, +π/β midline}.
    for (double s : {0.0, s_max, -s_max, 0.5 * s_max}) {
        if (std::abs(s) > ff.strip_half_width) {
            rep.clauses.push_back({"strip_integral", false, 0.0});
            continue;
        }
        double val = 0.0;
        bool ok = true;
        try {
            val = integrate_adaptive(
                [&](double r) {
                    const Complex v = ff.eval_complex(Complex(r, s));
                    return std::norm(v) * (1.0 + std::abs(r) * std::abs(r) * std::abs(r));
                },
                -30.0 * ff.sigma, 30.0 * ff.sigma, 1e-10);
            ok = std::isfinite(val);
        } catch (const QuadratureDivergence&) {
            ok = false;
        }
        rep.clauses.push_back({"strip_integral_s=" + std::to_string(s), ok, val});
    }
    return rep;
}

} // namespace oscbath
