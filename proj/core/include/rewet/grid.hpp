#ifndef REWET_GRID_HPP
#define REWET_GRID_HPP

#include <vector>

namespace rewet {

/// Uniform 1-D cell-centered mesh: N cells of width dx = L/N, centers at
/// x_i = (i - 1/2) dx for i = 1..N.
struct Grid {
    int N;
    double L;
    double dx;

    Grid(int n_cells, double length);

    double center(int i) const { return (i + 0.5) * dx; }  // 0-based cell index
};

/// Per-cell conserved unknowns of the semi-discrete system, in storage order.
/// The state vector is cell-major: all kNumFields unknowns of cell i are
/// contiguous.
enum Field : int {
    kTheta = 0,   // water content
    kWAlpha = 1,  // theta * C_alpha
    kWBeta = 2,   // theta * C_beta
    kWQ = 3,      // theta * C_q
    kWGel = 4,    // theta * C_g
};

constexpr int kNumFields = 5;

inline int state_index(int cell, int field) {
    return cell * kNumFields + field;
}

}  // namespace rewet

#endif
