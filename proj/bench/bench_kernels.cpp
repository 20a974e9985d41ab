// Benchmark: serial reference vs OpenMP-parallel execution of the heavy
// kernels (singular-operator assembly, dispersion evaluation on the grid, and
// a correlation time sweep). Prints a small comparison table.

#include <chrono>
#include <cstdio>

#include "oscbath/cli_config.hpp"

using namespace oscbath;
using Clock = std::chrono::steady_clock;

namespace {

double time_run(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

int main() {
    const FormFactor ff = make_gaussian();
    const ModelParams params = make_model_params(ff, 1.0, 0.1);
    const RadialGrid grid = RadialGrid::standard(2000, 30.0);
    const ThermalState state{1.0};

    struct Row {
        const char* name;
        double serial, parallel;
    };
    std::vector<Row> rows;

    auto bench = [&](const char* name, const std::function<void()>& fn) {
        serial_mode() = true;
        const double ts = time_run(fn);
        serial_mode() = false;
        const double tp = time_run(fn);
        rows.push_back({name, ts, tp});
    };

    SpectralData sd;
    bench("dispersion on grid", [&] { sd = build_spectral_data(ff, params, grid); });
    ScatteringOps ops;
    bench("operator assembly", [&] { ops = build_scattering_ops(ff, sd, grid); });
    const SymplecticMap vmap = make_symplectic_map(ops, sd, grid);

    AnalyticProfile pf;
    pf.kind = AnalyticProfile::Kind::GaussianLorentz;
    pf.pole = 0.08;
    pf.amp = 0.2;
    const AnalyticTestFunction f = make_analytic(1.0, 0.3, pf, vmap, 0.05);
    bench("contour sweep (40 times)", [&] {
        for (int i = 0; i < 40; ++i)
            decay_cross_section(f, f, 0.25 * i, state, 0.05);
    });

    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]", "speedup");
    for (const auto& r : rows)
        std::printf("%-28s %12.4f %12.4f %8.2fx\n", r.name, r.serial, r.parallel,
                    r.serial / r.parallel);
    return 0;
}
