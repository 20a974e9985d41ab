#include "oscbath/radial_numerics.hpp"

#include "oscbath/formfactor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace oscbath {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) {
            x = it->second.first;
            w = it->second.second;
            return;
        }
    }
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    std::lock_guard<std::mutex> lock(mtx);
    cache[n] = {x, w};
}

namespace {

void append_panel(std::vector<double>& nodes, std::vector<double>& weights,
                  double a, double b, int order) {
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
        nodes.push_back(c + h * x[i]);
        weights.push_back(h * w[i]);
    }
}

std::vector<std::pair<double, double>> standard_panels(double r_min, double r_max) {
    std::vector<std::pair<double, double>> panels;
    auto push = [&](double a, double b) { panels.emplace_back(a, b); };

    // Geometric panels on (r_min, 0.1].
    {
        std::vector<double> edges;
        double e = 0.1;
        while (e > r_min * 1.0001) {
            edges.push_back(e);
            e *= 0.25;
        }
        edges.push_back(r_min);
        for (std::size_t i = edges.size(); i-- > 1;) push(edges[i], edges[i - 1]);
    }
    // Uniform panels on [0.1, 0.5].
    for (int i = 0; i < 4; ++i) push(0.1 + 0.1 * i, 0.1 + 0.1 * (i + 1));
    // Geometric grading toward r = 1 from both sides, half-widths 0.5 → 1e−5.
    {
        std::vector<double> hw;
        for (double h = 0.5; h > 1e-5; h *= 0.5) hw.push_back(h);
        hw.push_back(1e-5);
        for (std::size_t i = 0; i + 1 < hw.size(); ++i) push(1.0 - hw[i], 1.0 - hw[i + 1]);
        push(1.0 - hw.back(), 1.0);
        push(1.0, 1.0 + hw.back());
        for (std::size_t i = hw.size(); i-- > 1;) push(1.0 + hw[i], 1.0 + hw[i - 1]);
    }
    // Uniform panels on [1.5, r_max].
    {
        const int k = std::max(1, static_cast<int>(std::ceil(r_max - 1.5)));
        for (int i = 0; i < k; ++i)
            push(1.5 + (r_max - 1.5) * i / k, 1.5 + (r_max - 1.5) * (i + 1) / k);
    }
    return panels;
}

} // namespace

RadialGrid RadialGrid::standard(int n, double r_max, double r_min) {
    if (n < 64) throw ConfigError("grid size must be at least 64");
    const auto panels = standard_panels(r_min, r_max);
    const int order = std::max(4, static_cast<int>(std::lround(double(n) / panels.size())));
    std::vector<double> nodes, weights;
    nodes.reserve(panels.size() * order);
    weights.reserve(panels.size() * order);
    for (const auto& [a, b] : panels) append_panel(nodes, weights, a, b, order);

    RadialGrid g;
    g.r_max = r_max;
    g.requested_n = n;
    g.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), nodes.size());
    g.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), weights.size());
    return g;
}

Eigen::VectorXd measure_weights(const RadialGrid& g) {
    return 4.0 * PI * g.weights.array() * g.nodes.array().square();
}

Complex inner(const RadialFn& f, const RadialFn& g,
              const std::function<double(double)>& weight) {
    if (f.grid != g.grid) throw GridMismatch("inner product across different grids");
    const RadialGrid& gr = *f.grid;
    Complex s = 0.0;
    for (int i = 0; i < gr.size(); ++i) {
        const double r = gr.nodes[i];
        s += 4.0 * PI * gr.weights[i] * r * r * weight(r) * std::conj(f.values[i]) * g.values[i];
    }
    return s;
}

Complex inner(const RadialFn& f, const RadialFn& g) {
    if (f.grid != g.grid) throw GridMismatch("inner product across different grids");
    const RadialGrid& gr = *f.grid;
    Complex s = 0.0;
    for (int i = 0; i < gr.size(); ++i)
        s += 4.0 * PI * gr.weights[i] * gr.nodes[i] * gr.nodes[i] *
             std::conj(f.values[i]) * g.values[i];
    return s;
}

double norm(const RadialFn& f) { return std::sqrt(std::abs(inner(f, f))); }

double norm_alpha(const RadialFn& f, double alpha) {
    const RadialGrid& gr = *f.grid;
    double s = 0.0;
    for (int i = 0; i < gr.size(); ++i)
        s += 4.0 * PI * gr.weights[i] * std::pow(gr.nodes[i], 2.0 + 2.0 * alpha) *
             std::norm(f.values[i]);
    return std::sqrt(s);
}

namespace {

// Panels for the subtracted PV integrand: geometric clustering toward the pole
// from both sides plus coarse far panels.
std::vector<std::pair<double, double>> pv_panels(double a, double b, double s) {
    std::vector<std::pair<double, double>> panels;
    auto side = [&](double from, double to) {  // from → to approaching s at `to`
        const double len = std::abs(to - from);
        std::vector<double> hw;
        for (double h = len; h > 1e-5 * len; h *= 0.5) hw.push_back(h);
        hw.push_back(0.0);
        for (std::size_t i = 0; i + 1 < hw.size(); ++i) {
            const double lo = to > from ? to - hw[i] : to + hw[i + 1];
            const double hi = to > from ? to - hw[i + 1] : to + hw[i];
            panels.emplace_back(lo, hi);
        }
    };
    side(a, s);
    side(b, s);
    std::sort(panels.begin(), panels.end());
    return panels;
}

} // namespace

Complex pv_integral_c(const std::function<Complex(double)>& h, double s,
                      double a, double b, int panel_order) {
    if (!(s > a && s < b)) throw PoleOutOfRange("pv pole outside the domain");
    const Complex hs = h(s);
    Complex total = hs * std::log((s - a) / (b - s));
    std::vector<double> x, w;
    gauss_legendre(panel_order, x, w);
    for (const auto& [p, q] : pv_panels(a, b, s)) {
        const double c = 0.5 * (p + q), half = 0.5 * (q - p);
        for (int i = 0; i < panel_order; ++i) {
            const double r = c + half * x[i];
            total += half * w[i] * (h(r) - hs) / (s - r);
        }
    }
    return total;
}

double pv_integral(const std::function<double(double)>& h, double s,
                   double a, double b, int panel_order) {
    return pv_integral_c([&](double r) { return Complex(h(r), 0.0); }, s, a, b, panel_order)
        .real();
}

double pv_excision_oracle(const std::function<double(double)>& h, double s,
                          double a, double b) {
    auto excised = [&](double eps) {
        auto f = [&](double r) { return h(r) / (s - r); };
        return integrate_adaptive(f, a, s - eps, 1e-11) +
               integrate_adaptive(f, s + eps, b, 1e-11);
    };
    // Richardson in ε: the excised value is V + c·ε + O(ε²).
    const double v1 = excised(1e-3), v2 = excised(5e-4);
    return 2.0 * v2 - v1;
}

Complex line_integral(const std::function<Complex(Complex)>& f, double a, double b,
                      double height, int nodes) {
    const int order = 16;
    const int panels = std::max(1, nodes / order);
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    std::vector<Complex> terms(static_cast<std::size_t>(panels), Complex{});
    parallel_for(static_cast<std::size_t>(panels), [&](std::size_t p) {
        const double pa = a + (b - a) * double(p) / panels;
        const double pb = a + (b - a) * double(p + 1) / panels;
        const double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
        Complex s = 0.0;
        for (int i = 0; i < order; ++i) s += w[i] * f(Complex(c + h * x[i], height));
        terms[p] = s * h;
    });
    return pairwise_sum(std::move(terms));
}

Complex oscillatory_integral(const std::function<Complex(Complex)>& h, double t,
                             double shift, double half_width, int base_nodes) {
    if (t < 0.0) throw ConfigError("oscillatory_integral expects t >= 0");
    const double L = half_width;
    const double contour = (t > 0.0) ? shift : 0.0;
    if (contour > 0.0) {
        // Magnitude scan between the contours: a pole shows up as a blow-up.
        for (double frac : {0.25, 0.5, 0.75}) {
            for (int i = 0; i <= 64; ++i) {
                const Complex z(-L + 2.0 * L * i / 64.0, contour * frac);
                const Complex v = h(z);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) ||
                    std::abs(v) > 1e12)
                    throw ContourPole("integrand blows up between contours");
            }
        }
    }
    const int n = std::max(base_nodes, static_cast<int>(20.0 * t * L / PI));
    auto f = [&](Complex z) { return h(z) * std::exp(I * t * z); };
    return line_integral(f, -L, L, contour, n);
}

} // namespace oscbath
