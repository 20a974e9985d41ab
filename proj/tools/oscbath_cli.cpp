// Command-line harness: resonance sweeps, operator-identity suites,
// correlation series, equilibrium state values, the anharmonic series, and
// the bundled verification suites. JSON config in, CSV/JSON out; every run
// writes a metadata sidecar with the config hash.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oscbath/cli_config.hpp"

namespace oscbath {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

int log_level() {
    const char* env = std::getenv("OSCBATH_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[oscbath] " << msg << "\n";
}

std::vector<double> parse_range(const std::string& spec) {
    // "a:b:step" inclusive sweep.
    const auto p1 = spec.find(':');
    const auto p2 = spec.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw ConfigError("range must be a:b:step");
    const double a = std::stod(spec.substr(0, p1));
    const double b = std::stod(spec.substr(p1 + 1, p2 - p1 - 1));
    const double step = std::stod(spec.substr(p2 + 1));
    if (step <= 0.0) throw ConfigError("range step must be positive");
    std::vector<double> out;
    for (double x = a; x <= b + 1e-12; x += step) out.push_back(x);
    return out;
}

void write_metadata(const std::string& out_path, const RunConfig& cfg,
                    double wall_seconds, const json& extra) {
    json meta;
    meta["config_hash"] = cfg.config_hash();
    meta["grid_n"] = cfg.grid_n;
    meta["r_max"] = cfg.grid_r_max;
    meta["beta"] = cfg.beta;
    meta["lambda"] = cfg.lambda;
    meta["seed"] = cfg.seed;
    meta["wall_seconds"] = wall_seconds;
    meta["extra"] = extra;
    std::ofstream f(out_path + ".meta.json");
    f << meta.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("parse error in ") + path + ": " + e.what());
    }
}

struct Session {
    RunConfig cfg;
    RadialGrid grid;
    ModelParams params;
    SpectralData sd;
    ScatteringOps ops;
    SymplecticMap vmap;
    ThermalState state;

    explicit Session(const RunConfig& c)
        : cfg(c),
          grid(RadialGrid::standard(c.grid_n, c.grid_r_max)),
          params(make_model_params(c.ff, c.beta, c.lambda)),
          sd(build_spectral_data(c.ff, params, grid)),
          ops(build_scattering_ops(c.ff, sd, grid)),
          vmap(make_symplectic_map(ops, sd, grid)),
          state{c.beta} {}
};

int cmd_resonance(const RunConfig& cfg, const std::string& sweep, const std::string& out) {
    const auto t0 = Clock::now();
    std::vector<double> lambdas =
        sweep.empty() ? std::vector<double>{cfg.lambda} : parse_range(sweep);
    const RadialGrid grid = RadialGrid::standard(cfg.grid_n, cfg.grid_r_max);
    std::ofstream csv(out);
    csv.precision(15);
    csv << "lambda,re_kappa,im_kappa,residual,q_norm\n";
    for (double lam : lambdas) {
        log_info("resonance at lambda=" + std::to_string(lam));
        const ModelParams p = make_model_params(cfg.ff, cfg.beta, lam);
        const SpectralData sd = build_spectral_data(cfg.ff, p, grid);
        csv << lam << "," << sd.kappa_hat.real() << "," << sd.kappa_hat.imag() << ","
            << sd.resonance_residual << "," << sd.q_norm << "\n";
    }
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    write_metadata(out, cfg, wall, {{"rows", lambdas.size()}});
    return 0;
}

int cmd_identities(const RunConfig& cfg, int trials, int refine, const std::string& out) {
    const auto t0 = Clock::now();
    json rep;
    int n = cfg.grid_n;
    for (int k = 0; k <= refine; ++k, n *= 2) {
        RunConfig c = cfg;
        c.grid_n = n;
        log_info("identities at n=" + std::to_string(n));
        Session s(c);
        const CcrReport ccr = verify_ccr_identities(s.ops, s.sd, trials, cfg.seed);
        json level;
        level["grid_n"] = n;
        level["id1"] = ccr.id1;
        level["id2"] = ccr.id2;
        level["id3"] = ccr.id3;
        level["id4"] = ccr.id4;
        const RadialFn tq = s.ops.Tstar.apply(s.sd.q);
        level["tstar_q_residual"] = norm(tq) / s.sd.q_norm;
        rep["levels"].push_back(level);
    }
    std::ofstream f(out);
    f << rep.dump(2) << "\n";
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    write_metadata(out, cfg, wall, {{"trials", trials}});
    return 0;
}

int cmd_correlate(const RunConfig& cfg, const std::string& f1p, const std::string& f2p,
                  const std::string& f3p, const std::string& trange,
                  const std::string& out) {
    const auto t0 = Clock::now();
    Session s(cfg);
    const TestFunction f1 = test_function_from_json(load_json(f1p), s.grid);
    const TestFunction f2 = test_function_from_json(load_json(f2p), s.grid);
    const TestFunction f3 = test_function_from_json(load_json(f3p), s.grid);
    const Complex base = three_point_baseline(f1, f2, f3, s.state, s.vmap);
    const std::vector<double> times = parse_range(trange);

    std::vector<Complex> vals(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        vals[i] = three_point(f1, f2, f3, times[i], s.state, s.vmap);

    std::ofstream csv(out);
    csv.precision(15);
    csv << "t,re,im,abs_delta\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        csv << times[i] << "," << vals[i].real() << "," << vals[i].imag() << ","
            << std::abs(vals[i] - base) << "\n";
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    write_metadata(out, cfg, wall,
                   {{"baseline_re", base.real()}, {"baseline_im", base.imag()}});
    return 0;
}

int cmd_equilibrium(const RunConfig& cfg, const std::string& weyl) {
    Session s(cfg);
    const TestFunction tf = test_function_from_json(load_json(weyl), s.grid);
    json out;
    out["omega"] = omega_interacting(tf, s.state, s.vmap);
    out["gibbs_particle_re"] =
        gibbs_particle_char(tf.c, s.params, cfg.beta).real();
    out["config_hash"] = cfg.config_hash();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_dyson(const RunConfig& cfg, const std::string& measure_path, int order,
              const std::string& trange, const std::string& out) {
    const auto t0 = Clock::now();
    Session s(cfg);
    const AtomicMeasure m = measure_from_json(load_json(measure_path));
    DysonConfig dcfg;
    dcfg.order = order;
    const TestFunction zero = TestFunction::zero(s.grid);
    const std::vector<double> times = parse_range(trange);
    std::ofstream csv(out);
    csv.precision(15);
    csv << "t,re,im,truncation_warning\n";
    for (double t : times) {
        const DysonResult r = dyson_three_point(zero, zero, zero, m, t, dcfg, s.state, s.vmap);
        csv << t << "," << r.total.real() << "," << r.total.imag() << ","
            << (r.truncation_warning ? 1 : 0) << "\n";
    }
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    write_metadata(out, cfg, wall, {{"order", order}, {"atoms", m.atoms.size()}});
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, int trials) {
    if (suite == "appendix-b") {
        const AppendixBoundReport rep = verify_appendix_bound(trials, 8, 16, cfg.seed);
        json out;
        out["trials"] = rep.trials;
        out["violations"] = rep.violations;
        out["worst_margin"] = rep.worst_margin;
        std::cout << out.dump(2) << "\n";
        return rep.violations == 0 ? 0 : 2;
    }
    if (suite == "identities") {
        Session s(cfg);
        const CcrReport ccr = verify_ccr_identities(s.ops, s.sd, trials, cfg.seed);
        json out;
        out["id1"] = ccr.id1;
        out["id2"] = ccr.id2;
        out["id3"] = ccr.id3;
        out["id4"] = ccr.id4;
        std::cout << out.dump(2) << "\n";
        return ccr.max_residual() < 1e-4 ? 0 : 2;
    }
    if (suite == "hypothesis") {
        const HypothesisReport rep = verify_hypothesis(cfg.ff, cfg.beta);
        json out;
        for (const auto& c : rep.clauses)
            out["clauses"].push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}});
        std::cout << out.dump(2) << "\n";
        return rep.all_pass() ? 0 : 2;
    }
    throw ConfigError("unknown suite: " + suite);
}

int cli_main(int argc, char** argv) {
    CLI::App app{"oscillator-bath model toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path = "out.csv", sweep, trange = "0:10:0.5";
    std::string f1p, f2p, f3p, weyl, measure_path, suite = "identities";
    int trials = 100, refine = 0, threads = 0, order = 2;
    unsigned seed = 42;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_path, "output path");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads (0 = default)");
    app.add_option("--refine", refine, "grid-doubling refinement levels");

    auto* c_res = app.add_subcommand("resonance", "resonance sweep");
    c_res->add_option("--lambda-sweep", sweep, "a:b:step");
    auto* c_ident = app.add_subcommand("identities", "operator identity residuals");
    c_ident->add_option("--trials", trials);
    auto* c_corr = app.add_subcommand("correlate", "three-point correlation series");
    c_corr->add_option("--f1", f1p)->required();
    c_corr->add_option("--f2", f2p)->required();
    c_corr->add_option("--f3", f3p)->required();
    c_corr->add_option("--t", trange);
    auto* c_eq = app.add_subcommand("equilibrium", "equilibrium state value");
    c_eq->add_option("--weyl", weyl)->required();
    auto* c_dy = app.add_subcommand("dyson", "anharmonic series");
    c_dy->add_option("--measure", measure_path)->required();
    c_dy->add_option("--order", order);
    c_dy->add_option("--t", trange);
    auto* c_ver = app.add_subcommand("verify", "verification suites");
    c_ver->add_option("--suite", suite);
    c_ver->add_option("--trials", trials);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        RunConfig cfg = config_path.empty() ? RunConfig{make_gaussian(), 1.0, 0.1}
                                            : RunConfig::from_file(config_path);
        cfg.seed = seed;
        if (app.got_subcommand(c_res)) return cmd_resonance(cfg, sweep, out_path);
        if (app.got_subcommand(c_ident)) return cmd_identities(cfg, trials, refine, out_path);
        if (app.got_subcommand(c_corr))
            return cmd_correlate(cfg, f1p, f2p, f3p, trange, out_path);
        if (app.got_subcommand(c_eq)) return cmd_equilibrium(cfg, weyl);
        if (app.got_subcommand(c_dy))
            return cmd_dyson(cfg, measure_path, order, trange, out_path);
        if (app.got_subcommand(c_ver)) return cmd_verify(cfg, suite, trials);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace
} // namespace oscbath

int main(int argc, char** argv) { return oscbath::cli_main(argc, argv); }
