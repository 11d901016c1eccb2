#include "rewet/discretization.hpp"

#include <algorithm>
#include <cmath>

#include "rewet/constitutive.hpp"
#include "rewet/errors.hpp"

namespace rewet {

namespace cn = constitutive;

Grid::Grid(int n_cells, double length) : N(n_cells), L(length) {
    if (n_cells < 4) throw InvalidGridError("grid needs at least 4 cells");
    if (length <= 0.0) throw InvalidGridError("grid length must be positive");
    dx = length / n_cells;
}

JacobianSparsity jacobian_sparsity(const Grid& grid) {
    return {grid.N, kNumFields};
}

FvSystem::FvSystem(const ParameterSet& params, const Grid& grid,
                   BoundaryMode mode)
    : params_(params), grid_(grid), mode_(mode) {
    params_.validate();
}

std::vector<double> FvSystem::initial_state() const {
    std::vector<double> y(size());
    const double th = params_.theta_min;
    for (int i = 0; i < grid_.N; ++i) {
        y[state_index(i, kTheta)] = th;
        y[state_index(i, kWAlpha)] = th * params_.C_alpha0;
        y[state_index(i, kWBeta)] = th * params_.C_beta0;
        y[state_index(i, kWQ)] = th * params_.C_q0;
        y[state_index(i, kWGel)] = th * params_.C_g0;
    }
    return y;
}

double FvSystem::recover(double w, double theta) {
    return w / std::max(theta, 1e-12);
}

GhostValues FvSystem::apply_ghost_cells(std::span<const double> y) const {
    GhostValues g{};
    const int N = grid_.N;
    double theta1 = y[state_index(0, kTheta)];
    double thetaN = y[state_index(N - 1, kTheta)];
    double Cg1 = recover(y[state_index(0, kWGel)], theta1);

    if (mode_ == BoundaryMode::kImbibition) {
        // Heavy gel accumulation in the first cell can push the raw Dirichlet
        // value below the residual saturation; the boundary water content is
        // physically confined to [theta_min, theta_max].
        g.theta_bc = std::clamp(params_.theta_max - Cg1 / params_.rho_gel,
                                params_.theta_min, params_.theta_max);
        g.left[kTheta] = 2.0 * g.theta_bc - theta1;
        for (int f : {kWAlpha, kWBeta, kWQ})
            g.left[f] = -recover(y[state_index(0, f)], theta1);
        // C_g is not transported; mirror it so face porosity is one-sided.
        g.left[kWGel] = Cg1;
    } else {
        g.theta_bc = theta1;
        g.left[kTheta] = theta1;
        for (int f : {kWAlpha, kWBeta, kWQ})
            g.left[f] = recover(y[state_index(0, f)], theta1);
        g.left[kWGel] = Cg1;
    }

    g.right[kTheta] = thetaN;
    for (int f : {kWAlpha, kWBeta, kWQ})
        g.right[f] = recover(y[state_index(N - 1, f)], thetaN);
    g.right[kWGel] = recover(y[state_index(N - 1, kWGel)], thetaN);
    return g;
}

void FvSystem::rhs(double t, std::span<const double> y,
                   std::span<double> dydt) const {
    (void)t;
    const int N = grid_.N;
    const double dx = grid_.dx;
    const ParameterSet& p = params_;

    // Ghost-extended cell values, index 0..N+1 (interior 1..N).
    std::vector<double> theta(N + 2), Ca(N + 2), Cb(N + 2), Cq(N + 2),
        phi(N + 2);
    std::vector<double> Cg(N);

    for (int i = 0; i < N; ++i) {
        double th = y[state_index(i, kTheta)];
        theta[i + 1] = th;
        Ca[i + 1] = recover(y[state_index(i, kWAlpha)], th);
        Cb[i + 1] = recover(y[state_index(i, kWBeta)], th);
        Cq[i + 1] = recover(y[state_index(i, kWQ)], th);
        Cg[i] = recover(y[state_index(i, kWGel)], th);
        phi[i + 1] = cn::porosity(Cg[i], p);
    }
    GhostValues g = apply_ghost_cells(y);
    theta[0] = g.left[kTheta];
    Ca[0] = g.left[kWAlpha];
    Cb[0] = g.left[kWBeta];
    Cq[0] = g.left[kWQ];
    phi[0] = cn::porosity(g.left[kWGel], p);
    theta[N + 1] = g.right[kTheta];
    Ca[N + 1] = g.right[kWAlpha];
    Cb[N + 1] = g.right[kWBeta];
    Cq[N + 1] = g.right[kWQ];
    phi[N + 1] = cn::porosity(g.right[kWGel], p);

    // Face fluxes, face f = 0..N between extended cells f and f+1.
    std::vector<double> Fw(N + 1), Ga(N + 1), Gb(N + 1), Gq(N + 1);
    for (int f = 0; f <= N; ++f) {
        double th_f = 0.5 * (theta[f] + theta[f + 1]);
        double phi_f = 0.5 * (phi[f] + phi[f + 1]);
        double D = cn::water_diffusivity(th_f, phi_f, p);
        double u = -D * (theta[f + 1] - theta[f]) / dx;
        Fw[f] = u;
        Ga[f] = -th_f * p.D_alpha * (Ca[f + 1] - Ca[f]) / dx +
                u * 0.5 * (Ca[f] + Ca[f + 1]);
        Gb[f] = -th_f * p.D_beta * (Cb[f + 1] - Cb[f]) / dx +
                u * 0.5 * (Cb[f] + Cb[f + 1]);
        Gq[f] = -th_f * p.D_q * (Cq[f + 1] - Cq[f]) / dx +
                u * 0.5 * (Cq[f] + Cq[f + 1]);
    }

    for (int i = 0; i < N; ++i) {
        double cut = cn::cutoff(theta[i + 1], p);
        double ra = cn::silicate_rate(Ca[i + 1], p.C_alpha0, p.k_alpha, p.n_alpha);
        double rb = cn::silicate_rate(Cb[i + 1], p.C_beta0, p.k_beta, p.n_beta);
        double R = cn::csh_generation(ra, rb, p);

        dydt[state_index(i, kTheta)] =
            -(Fw[i + 1] - Fw[i]) / dx -
            p.nu * cut * p.m_w * R / (p.rho_w * p.m_csh);
        dydt[state_index(i, kWAlpha)] = -(Ga[i + 1] - Ga[i]) / dx - cut * ra;
        dydt[state_index(i, kWBeta)] = -(Gb[i + 1] - Gb[i]) / dx - cut * rb;
        dydt[state_index(i, kWQ)] =
            -(Gq[i + 1] - Gq[i]) / dx +
            cut * (R - p.k_prec * Cq[i + 1] + p.k_diss * Cg[i]);
        dydt[state_index(i, kWGel)] =
            cut * (p.k_prec * Cq[i + 1] - p.k_diss * Cg[i]);
    }

    for (int i = 0; i < N; ++i)
        for (int f = 0; f < kNumFields; ++f)
            if (!std::isfinite(dydt[state_index(i, f)]))
                throw NumericalFailureError("non-finite RHS value", i);
}

FvSystem::BoundaryFluxes FvSystem::boundary_fluxes(
    std::span<const double> y) const {
    const int N = grid_.N;
    const double dx = grid_.dx;
    const ParameterSet& p = params_;
    GhostValues g = apply_ghost_cells(y);

    double theta1 = y[state_index(0, kTheta)];
    double Ca1 = recover(y[state_index(0, kWAlpha)], theta1);
    double Cb1 = recover(y[state_index(0, kWBeta)], theta1);
    double Cq1 = recover(y[state_index(0, kWQ)], theta1);
    double phi1 = cn::porosity(recover(y[state_index(0, kWGel)], theta1), p);

    double th_f = 0.5 * (g.left[kTheta] + theta1);
    double phi_f = phi1;  // gel mirrored across the boundary
    double D = cn::water_diffusivity(th_f, phi_f, p);
    double u = -D * (theta1 - g.left[kTheta]) / dx;

    BoundaryFluxes bf{};
    bf.water = u;
    bf.alpha = -th_f * p.D_alpha * (Ca1 - g.left[kWAlpha]) / dx +
               u * 0.5 * (g.left[kWAlpha] + Ca1);
    bf.beta = -th_f * p.D_beta * (Cb1 - g.left[kWBeta]) / dx +
              u * 0.5 * (g.left[kWBeta] + Cb1);
    bf.q = -th_f * p.D_q * (Cq1 - g.left[kWQ]) / dx +
           u * 0.5 * (g.left[kWQ] + Cq1);

    double sink = 0.0;
    for (int i = 0; i < N; ++i) {
        double th = y[state_index(i, kTheta)];
        double cut = cn::cutoff(th, p);
        double ra = cn::silicate_rate(recover(y[state_index(i, kWAlpha)], th),
                                      p.C_alpha0, p.k_alpha, p.n_alpha);
        double rb = cn::silicate_rate(recover(y[state_index(i, kWBeta)], th),
                                      p.C_beta0, p.k_beta, p.n_beta);
        double R = cn::csh_generation(ra, rb, p);
        sink += p.nu * cut * p.m_w * R / (p.rho_w * p.m_csh) * dx;
    }
    bf.water_sink = sink;
    return bf;
}

FvSystem::Totals FvSystem::totals(std::span<const double> y) const {
    Totals tot{0.0, 0.0};
    const ParameterSet& p = params_;
    for (int i = 0; i < grid_.N; ++i) {
        tot.water += y[state_index(i, kTheta)] * grid_.dx;
        tot.silicate_moles +=
            (y[state_index(i, kWAlpha)] / p.m_alpha +
             y[state_index(i, kWBeta)] / p.m_beta +
             2.0 * (y[state_index(i, kWQ)] + y[state_index(i, kWGel)]) /
                 p.m_csh) *
            grid_.dx;
    }
    return tot;
}

}  // namespace rewet
