#ifndef REWET_DISCRETIZATION_HPP
#define REWET_DISCRETIZATION_HPP

#include <span>
#include <vector>

#include "rewet/grid.hpp"
#include "rewet/params.hpp"

namespace rewet {

/// Left-end treatment.  Imbibition is the physical setup (saturated Dirichlet
/// on theta, perfect sink on aqueous species); Sealed mirrors the right end
/// and exists for conservation checks.
enum class BoundaryMode { kImbibition, kSealed };

/// Ghost values one half-cell outside each end.  The kTheta slot holds the
/// ghost water content; the species slots hold ghost *concentrations* (the
/// quantities the flux stencil averages), with kWGel carrying mirrored C_g.
struct GhostValues {
    double left[kNumFields];   // cell 0 ghost (x = -dx/2)
    double right[kNumFields];  // cell N+1 ghost, all fields mirrored
    double theta_bc;           // Dirichlet value theta_max - C_g(0)/rho_gel
};

/// Block-tridiagonal coupling pattern of the semi-discrete RHS: 5x5 blocks,
/// each cell coupled to itself and its immediate neighbours.
struct JacobianSparsity {
    int n_cells;
    int block_size;

    long nonzeros() const {
        return static_cast<long>(block_size) * block_size * (3L * n_cells - 2);
    }
    bool contains(int row, int col) const {
        int bi = row / block_size, bj = col / block_size;
        return bi - 1 <= bj && bj <= bi + 1;
    }
};

JacobianSparsity jacobian_sparsity(const Grid& grid);

/// Semi-discrete finite-volume system for the five coupled conservation laws.
class FvSystem {
public:
    FvSystem(const ParameterSet& params, const Grid& grid,
             BoundaryMode mode = BoundaryMode::kImbibition);

    const ParameterSet& params() const { return params_; }
    const Grid& grid() const { return grid_; }
    BoundaryMode boundary_mode() const { return mode_; }
    int size() const { return grid_.N * kNumFields; }

    /// Uniform initial state (theta = theta_min, w = theta_min * C_j0).
    std::vector<double> initial_state() const;

    /// Ghost-cell concentrations/water content implied by the boundary
    /// conditions at the current state.
    GhostValues apply_ghost_cells(std::span<const double> y) const;

    /// Full semi-discrete rate vector dy/dt.  Throws NumericalFailureError
    /// (with the cell index) if a non-finite flux appears.
    void rhs(double t, std::span<const double> y, std::span<double> dydt) const;

    /// Instantaneous fluxes through the left boundary face (positive into
    /// the domain) and domain totals, for conservation audits.
    struct BoundaryFluxes {
        double water;        // u(0), cm/day
        double alpha;        // advective+diffusive alite mass flux, g/(cm^2 day)
        double beta;
        double q;
        double water_sink;   // domain-integrated reaction sink of theta, cm/day
    };
    BoundaryFluxes boundary_fluxes(std::span<const double> y) const;

    struct Totals {
        double water;           // integral of theta dx, cm
        double silicate_moles;  // integral of w_a/m_a + w_b/m_b + 2(w_q+w_g)/m_csh
    };
    Totals totals(std::span<const double> y) const;

    /// Recover concentration C = w/theta with theta guarded below.
    static double recover(double w, double theta);

private:
    ParameterSet params_;
    Grid grid_;
    BoundaryMode mode_;
};

}  // namespace rewet

#endif
