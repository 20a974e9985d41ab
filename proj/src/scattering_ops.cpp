#include "oscbath/scattering_ops.hpp"

#include <cmath>
#include <limits>

namespace oscbath {

GridOperator conj_op(const GridOperator& a) {
    GridOperator out;
    out.grid = a.grid;
    out.matrix = a.matrix.conjugate();
    out.label = a.label + "_bar";
    return out;
}

GridOperator adjoint_op(const GridOperator& a) {
    const Eigen::VectorXcd W = measure_weights(*a.grid).cast<Complex>();
    GridOperator out;
    out.grid = a.grid;
    out.matrix = W.cwiseInverse().asDiagonal() * a.matrix.adjoint() * W.asDiagonal();
    out.label = a.label + "_adj";
    return out;
}

GridOperator build_G(const RadialGrid& grid) {
    const int n = grid.size();
    GridOperator op;
    op.grid = &grid;
    op.label = "G";
    op.matrix = Eigen::MatrixXcd::Zero(n, n);
    const double R = grid.r_max;

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t iu) {
        const int i = static_cast<int>(iu);
        const double ri = grid.nodes[i];
        auto psi = [&](double rp) {
            return 4.0 * PI * rp * std::sqrt(rp) / (std::sqrt(ri) * (ri + rp));
        };
        const double psi_i = 2.0 * PI;          // ψ at r′ = r_i
        const double dpsi_i = 2.0 * PI / ri;    // ψ′ at r′ = r_i
        double sum_inv = 0.0;                   // Σ_{j≠i} w_j/(r_i−r_j)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double rj = grid.nodes[j];
            op.matrix(i, j) = grid.weights[j] * psi(rj) / (ri - rj);
            sum_inv += grid.weights[j] / (ri - rj);
        }
        // Diagonal: exact PV log term, subtraction counter-terms, and the
        // derivative of the subtracted integrand at the pole.
        op.matrix(i, i) += psi_i * (std::log(ri / (R - ri)) - sum_inv);
        op.matrix(i, i) += -grid.weights[i] * dpsi_i;
        // h′(r_i) via a 3-point Lagrange stencil on neighboring nodes.
        const int a = (i == 0) ? 0 : (i == n - 1 ? n - 3 : i - 1);
        const double x0 = grid.nodes[a], x1 = grid.nodes[a + 1], x2 = grid.nodes[a + 2];
        const double xi = ri;
        const double d0 = (2.0 * xi - x1 - x2) / ((x0 - x1) * (x0 - x2));
        const double d1 = (2.0 * xi - x0 - x2) / ((x1 - x0) * (x1 - x2));
        const double d2 = (2.0 * xi - x0 - x1) / ((x2 - x0) * (x2 - x1));
        op.matrix(i, a) += -grid.weights[i] * psi_i * d0;
        op.matrix(i, a + 1) += -grid.weights[i] * psi_i * d1;
        op.matrix(i, a + 2) += -grid.weights[i] * psi_i * d2;
        // On-shell contribution of the ε→0 kernel limit: −iπδ(r²−r′²)
        // integrates to −2π²i times the identity in the radial sector.
        op.matrix(i, i) += Complex(0.0, -2.0 * PI * PI);
    });
    return op;
}

GridOperator build_G_eps(const RadialGrid& grid, double eps) {
    const int n = grid.size();
    GridOperator op;
    op.grid = &grid;
    op.label = "G_eps";
    op.matrix.resize(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t iu) {
        const int i = static_cast<int>(iu);
        const double ri = grid.nodes[i];
        for (int j = 0; j < n; ++j) {
            const double rj = grid.nodes[j];
            op.matrix(i, j) = grid.weights[j] * 4.0 * PI * rj * rj /
                              (std::sqrt(ri * rj) * Complex(ri * ri - rj * rj, eps));
        }
    });
    return op;
}

namespace {

// Algebraic completion of the raw W₊ discretization (see the header note).
// Works in the symmetrized space x̃ = diag(√W)·x in which the 4πr²dr inner
// product becomes the plain Euclidean one, so adjoints are plain conjugate
// transposes.  Returns the corrected symmetrized matrix.
Eigen::MatrixXcd complete_wplus(const Eigen::MatrixXcd& X0, const Eigen::MatrixXcd& Wm,
                                const Eigen::VectorXcd& qpt, const Eigen::VectorXcd& qmt,
                                const RadialGrid& grid) {
    const int n = static_cast<int>(X0.rows());

    // Low-rank eigenstructure of K := W₋ᴴW₋ − q₊q₊ᴴ + q₋q₋ᴴ.  The kernel of
    // W₋ is analytic, so K has rapidly decaying spectrum; a randomized range
    // sketch of W₋ᴴ plus the two projector directions spans it to roundoff.
    const int sketch = std::min(160, n / 4);
    std::mt19937_64 srng(0x5eedULL);
    std::normal_distribution<double> g01(0.0, 1.0);
    Eigen::MatrixXcd omega(n, sketch);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < sketch; ++j) omega(i, j) = Complex(g01(srng), g01(srng));
    Eigen::MatrixXcd basis(n, sketch + 2);
    basis.leftCols(sketch) = Wm.adjoint() * (Wm * omega);
    basis.col(sketch) = qpt;
    basis.col(sketch + 1) = qmt;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, sketch + 2);
    const int m = sketch + 2;

    const Eigen::MatrixXcd WmQ = Wm * Q;
    Eigen::MatrixXcd S = WmQ.adjoint() * WmQ -
                         (Q.adjoint() * qpt) * (qpt.adjoint() * Q) +
                         (Q.adjoint() * qmt) * (qmt.adjoint() * Q);
    S = 0.5 * (S + S.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
    const Eigen::MatrixXcd modes = Q * es.eigenvectors();  // K = modes·diag(κ)·modesᴴ
    const Eigen::VectorXd kappa = es.eigenvalues();

    // M = 1 + K.  The smallest eigenvalue is an exact zero when the continuum
    // operator has a kernel direction (the generic interacting case); treat it
    // as exact and use the pseudo-inverse square root in that direction.
    const bool has_null = (1.0 + kappa(0)) < 0.5;
    Eigen::VectorXd sq_shift(m), isq_shift(m);
    for (int k = 0; k < m; ++k) {
        const double mu = std::max(1.0 + kappa(k), 0.0);
        sq_shift(k) = std::sqrt(mu) - 1.0;
        isq_shift(k) = (has_null && k == 0) ? -1.0 : 1.0 / std::sqrt(mu) - 1.0;
    }

    // Y := X₀·M^{−1/2} (pseudo-inverse when M is singular), made invertible by
    // sending the null direction u₀ to the one direction m₀ := X₀⁻ᴴu₀ missing
    // from the range of X₀·M^{−1/2}.
    Eigen::MatrixXcd Y = X0 + (X0 * modes) * isq_shift.asDiagonal() * modes.adjoint();
    Eigen::VectorXcd u0, m0;
    if (has_null) {
        u0 = modes.col(0);
        m0 = X0.partialPivLu().adjoint().solve(u0);
        m0.normalize();
        Y += m0 * u0.adjoint();
    }

    // Unitary polar factor by the scaled Newton iteration.
    for (int it = 0; it < 30; ++it) {
        const Eigen::MatrixXcd Yinv = Y.partialPivLu().inverse();
        const double gamma = std::sqrt(Yinv.norm() / Y.norm());
        const Eigen::MatrixXcd Yn = 0.5 * (gamma * Y + (1.0 / gamma) * Yinv.adjoint());
        const double step = (Yn - Y).norm() / Yn.norm();
        Y = Yn;
        if (step < 1e-13) break;
    }

    if (has_null) {
        // Rotate the lost output direction m₀ (which sits on the resonance
        // region, where damped test vectors live) onto a far grid node.
        int ifar = 0;
        double best = std::numeric_limits<double>::max();
        const double target = std::min(20.0, 0.66 * grid.r_max);
        for (int i = 0; i < n; ++i) {
            const double d = std::abs(grid.nodes[i] - target);
            if (d < best) { best = d; ifar = i; }
        }
        // The direction actually missing from the range of U·M^{1/2} is U·u₀
        // (m₀ only approximates it to the accuracy of Y's unitarity defect,
        // and that mismatch would leak into the mixed identities through W₋).
        Eigen::VectorXcd d0 = Y * u0;
        d0.normalize();
        Eigen::VectorXcd efar = Eigen::VectorXcd::Zero(n);
        efar(ifar) = 1.0;
        efar -= d0 * (d0.adjoint() * efar);
        efar.normalize();
        Y += (efar - d0) * (d0.adjoint() * Y) - (efar + d0) * (efar.adjoint() * Y);
    }

    // X := U·M^{1/2}.
    return Y + (Y * modes) * sq_shift.asDiagonal() * modes.adjoint();
}

} // namespace

ScatteringOps build_scattering_ops(const FormFactor& ff, const SpectralData& sd,
                                   const RadialGrid& grid) {
    const int n = grid.size();
    ScatteringOps ops;
    ops.G = build_G(grid);

    Eigen::VectorXcd sqrtrQ(n), sqrtr_rho(n), sqrtrQc(n);
    Eigen::VectorXcd dplus_half(n), dminus_half(n);
    for (int i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        sqrtrQ[i] = std::sqrt(r) * sd.q.values[i];
        sqrtrQc[i] = std::sqrt(r) * std::conj(sd.q.values[i]);
        sqrtr_rho[i] = std::sqrt(r) * ff.eval(r);
        dplus_half[i] = std::sqrt(r);
        dminus_half[i] = 1.0 / std::sqrt(r);
    }
    const double lam = sd.params.lambda;

    ops.T.grid = &grid;
    ops.T.label = "T";
    ops.T.matrix = Eigen::MatrixXcd::Identity(n, n) +
                   lam * sqrtrQ.asDiagonal() * ops.G.matrix * sqrtr_rho.asDiagonal();
    ops.Tstar.grid = &grid;
    ops.Tstar.label = "Tstar";
    ops.Tstar.matrix = Eigen::MatrixXcd::Identity(n, n) -
                       lam * sqrtr_rho.asDiagonal() * ops.G.matrix * sqrtrQc.asDiagonal();

    auto make_w = [&](double sign) {
        GridOperator w;
        w.grid = &grid;
        w.label = sign > 0 ? "Wplus" : "Wminus";
        w.matrix = 0.5 * (dminus_half.asDiagonal() * ops.Tstar.matrix * dplus_half.asDiagonal() +
                          sign * dplus_half.asDiagonal() * ops.Tstar.matrix *
                              dminus_half.asDiagonal());
        return w;
    };
    ops.Wplus = make_w(+1.0);
    ops.Wminus_comp = make_w(-1.0);
    ops.Wminus_comp.label = "Wminus_comp";
    ops.Wminus = build_Wminus_kernel(ff, sd, grid);
    ops.Wminus.label = "Wminus";

    if (lam != 0.0) {
        const Eigen::VectorXd W = measure_weights(grid);
        const Eigen::VectorXd sq = W.cwiseSqrt();
        const Eigen::MatrixXcd X0 =
            sq.asDiagonal() * ops.Wplus.matrix * sq.cwiseInverse().asDiagonal();
        const Eigen::MatrixXcd Wm =
            sq.asDiagonal() * ops.Wminus.matrix * sq.cwiseInverse().asDiagonal();
        const Eigen::VectorXcd qpt = sq.asDiagonal() * sd.q_plus.values;
        const Eigen::VectorXcd qmt = sq.asDiagonal() * sd.q_minus.values;
        const Eigen::MatrixXcd X = complete_wplus(X0, Wm, qpt, qmt, grid);
        ops.Wplus.matrix = sq.cwiseInverse().asDiagonal() * X * sq.asDiagonal();
    }

    ops.Tbar = conj_op(ops.T);
    ops.Tstar_bar = conj_op(ops.Tstar);
    ops.Wplus_bar = conj_op(ops.Wplus);
    ops.Wminus_bar = conj_op(ops.Wminus);

    ops.Wplus_adj = adjoint_op(ops.Wplus);
    ops.Wminus_adj = adjoint_op(ops.Wminus);
    ops.Wplus_bar_adj = adjoint_op(ops.Wplus_bar);
    ops.Wplus_bar_adj.label = "Wplus_bar_adj";
    ops.Wminus_bar_adj = adjoint_op(ops.Wminus_bar);
    ops.Wminus_bar_adj.label = "Wminus_bar_adj";
    return ops;
}

GridOperator build_Wminus_kernel(const FormFactor& ff, const SpectralData& sd,
                                 const RadialGrid& grid) {
    const int n = grid.size();
    GridOperator op;
    op.grid = &grid;
    op.label = "Wminus_kernel";
    op.matrix.resize(n, n);
    const double lam = sd.params.lambda;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t iu) {
        const int i = static_cast<int>(iu);
        const double ri = grid.nodes[i];
        const double rho_i = ff.eval(ri);
        for (int j = 0; j < n; ++j) {
            const double rj = grid.nodes[j];
            const Complex kernel = lam * rho_i * std::conj(sd.q.values[j]) /
                                   (2.0 * std::sqrt(ri * rj) * (ri + rj));
            op.matrix(i, j) = kernel * 4.0 * PI * grid.weights[j] * rj * rj;
        }
    });
    return op;
}

RadialFn random_damped(const RadialGrid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    RadialFn f = RadialFn::zero(grid);
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        f.values[i] = Complex(gauss(rng), gauss(rng)) * std::exp(-r);
    }
    return f;
}

CcrReport verify_ccr_identities(const ScatteringOps& ops, const SpectralData& sd,
                                int trials, unsigned seed) {
    const RadialGrid& grid = *ops.G.grid;
    const int n = grid.size();
    const GridOperator& WpA = ops.Wplus_adj;
    const GridOperator& WmA = ops.Wminus_adj;
    const GridOperator& WpbA = ops.Wplus_bar_adj;
    const GridOperator& WmbA = ops.Wminus_bar_adj;

    const RadialFn& qp = sd.q_plus;
    const RadialFn& qm = sd.q_minus;
    const Eigen::VectorXcd qpb = qp.values.conjugate();
    const Eigen::VectorXcd qmb = qm.values.conjugate();
    const Eigen::VectorXd W = measure_weights(grid);
    const Eigen::VectorXcd wqp = W.cast<Complex>().cwiseProduct(qp.values);
    const Eigen::VectorXcd wqm = W.cast<Complex>().cwiseProduct(qm.values);

    // Stack all trial vectors as columns so every operator application is a
    // single matrix product instead of `trials` separate matrix-vector runs.
    std::mt19937_64 rng(seed);
    Eigen::MatrixXcd F(n, trials);
    for (int trial = 0; trial < trials; ++trial)
        F.col(trial) = random_damped(grid, rng).values;

    Eigen::VectorXd nf(trials);
    auto col_norms = [&](const Eigen::MatrixXcd& m) {
        Eigen::VectorXd out(m.cols());
        for (int j = 0; j < m.cols(); ++j)
            out[j] = std::sqrt(W.dot(m.col(j).cwiseAbs2()));
        return out;
    };
    nf = col_norms(F);

    const Eigen::MatrixXcd WpF = ops.Wplus.matrix * F;
    const Eigen::MatrixXcd WmF = ops.Wminus.matrix * F;
    const Eigen::MatrixXcd WpAF = WpA.matrix * F;
    const Eigen::MatrixXcd WmbAF = WmbA.matrix * F;
    const Eigen::RowVectorXcd ipP = wqp.adjoint() * F;  // ⟨Q+|f_j⟩
    const Eigen::RowVectorXcd ipM = wqm.adjoint() * F;  // ⟨Q-|f_j⟩

    CcrReport rep;
    auto record = [&](double& slot, const Eigen::MatrixXcd& res) {
        const Eigen::VectorXd rn = col_norms(res);
        for (int j = 0; j < trials; ++j) slot = std::max(slot, rn[j] / nf[j]);
    };

    // id1: W₊*W₊ f − W₋*W₋ f + ⟨Q₊|f⟩Q₊ − ⟨Q₋|f⟩Q₋ = f
    record(rep.id1, WpA.matrix * WpF - WmA.matrix * WmF + qp.values * ipP -
                        qm.values * ipM - F);
    // id2: W₊W₊* f − W̄₋W̄₋* f = f
    record(rep.id2, ops.Wplus.matrix * WpAF - ops.Wminus_bar.matrix * WmbAF - F);
    // id3: W̄₊*W₋ f − W̄₋*W₊ f + ⟨Q₋|f⟩Q̄₊ − ⟨Q₊|f⟩Q̄₋ = 0
    record(rep.id3, WpbA.matrix * WmF - WmbA.matrix * WpF + qpb * ipM - qmb * ipP);
    // id4: W₋W₊* f − W̄₊W̄₋* f = 0
    record(rep.id4, ops.Wminus.matrix * WpAF - ops.Wplus_bar.matrix * WmbAF);
    return rep;
}

} // namespace oscbath
