#include "oscbath/cli_config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace oscbath {

using nlohmann::json;

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;
    if (j.contains("form_factor")) {
        const auto& f = j.at("form_factor");
        const std::string family = f.value("family", "gaussian");
        if (family != "gaussian") throw ConfigError("unknown form factor family: " + family);
        cfg.ff = make_gaussian(f.value("sigma", 1.0), f.value("amplitude", 1.0),
                               f.value("strip_half_width", 12.0));
    } else {
        cfg.ff = make_gaussian();
    }
    cfg.beta = j.value("beta", 1.0);
    cfg.lambda = j.value("lambda", 0.1);
    if (j.contains("grid")) {
        cfg.grid_n = j.at("grid").value("n", 2000);
        cfg.grid_r_max = j.at("grid").value("r_max", 30.0);
    }
    cfg.seed = j.value("seed", 42u);
    if (cfg.beta <= 0.0) throw ConfigError("beta must be > 0");
    if (cfg.grid_n < 64) throw ConfigError("grid n must be >= 64");
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "family=gaussian;sigma=" << ff.sigma << ";amplitude=" << ff.amplitude
       << ";strip=" << ff.strip_half_width << ";beta=" << beta << ";lambda=" << lambda
       << ";grid_n=" << grid_n << ";r_max=" << grid_r_max << ";seed=" << seed;
    return os.str();
}

std::string RunConfig::config_hash() const {
    // FNV-1a 64-bit.
    const std::string s = canonical();
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

AnalyticProfile profile_from_json(const json& j) {
    AnalyticProfile p;
    const std::string kind = j.value("kind", "gaussian");
    if (kind == "gaussian")
        p.kind = AnalyticProfile::Kind::Gaussian;
    else if (kind == "gaussian_lorentz")
        p.kind = AnalyticProfile::Kind::GaussianLorentz;
    else if (kind == "gaussian_poly")
        p.kind = AnalyticProfile::Kind::GaussianPoly;
    else
        throw ConfigError("unknown profile kind: " + kind);
    p.sigma = j.value("sigma", 1.0);
    p.amp = j.value("amp", 1.0);
    p.pole = j.value("pole", 0.5);
    p.degree = j.value("degree", 0);
    return p;
}

TestFunction test_function_from_json(const json& j, const RadialGrid& grid) {
    TestFunction tf = TestFunction::zero(grid);
    if (j.contains("c")) {
        const auto& c = j.at("c");
        tf.c = Complex(c.at(0).get<double>(), c.at(1).get<double>());
    }
    if (j.contains("f")) {
        const AnalyticProfile p = profile_from_json(j.at("f"));
        tf.f = RadialFn::from_profile(grid,
                                      [&](double r) { return p.eval(Complex(r, 0.0)); });
    }
    return tf;
}

AtomicMeasure measure_from_json(const json& j) {
    AtomicMeasure m;
    for (const auto& a : j.at("atoms")) {
        AtomicMeasure::Atom atom;
        atom.mu = a.at("mu").get<double>();
        const auto& w = a.at("w");
        atom.w = Complex(w.at(0).get<double>(), w.at(1).get<double>());
        m.atoms.push_back(atom);
    }
    if (!m.is_symmetric(1e-9))
        throw ConfigError("measure must satisfy the conjugate-reflection symmetry");
    return m;
}

} // namespace oscbath
