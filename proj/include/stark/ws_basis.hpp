#ifndef STARK_WS_BASIS_HPP
#define STARK_WS_BASIS_HPP

// Lowest-ladder Wannier-Stark eigenbasis of the undriven washboard
// Hamiltonian
//
//   H = -(1/(2 m*)) d^2/dx^2 + V cos(2*pi*x) + F x
//
// discretized with second-order central differences and hard-wall (Dirichlet)
// boundaries just outside the box.  The eigenvalues of H form ladders spaced
// by omega_B = F; the lowest-ladder state localized in well n is phi_0
// translated by n periods and its energy is E_0 + n*omega_B.
//
// Conventions fixed here and relied upon everywhere else:
//   - phi_0 is real, L2-normalized on the grid (sum |phi|^2 h = 1), and
//     positive at the center of well 0 (x = 1/2).
//   - energies are reported shifted so that E_0 = 0.
//   - M_p = <phi_0| cos(2*pi*x) |phi_p> with phi_p(x) = phi_0(x - p);
//     the table is symmetric, M_p = M_{-p}.

#include <vector>

#include "stark/lattice.hpp"

namespace stark {

struct LadderState {
    double energy = 0.0;       // shifted so the origin-well ladder state is 0
    double centroid = 0.0;     // density centroid [periods]
    int well = 0;              // round(centroid - 1/2)
    int ladder_index = -1;     // rank of energy - well*omega_B within the well
    double participation = 0;  // inverse participation ratio over wells
    bool localized = false;    // participation <= 3 wells
    bool boundary = false;     // too close to a box edge; excluded from ladders
};

struct WannierStarkBasis {
    LatticeParams params;
    GridSpec grid;
    Axis axis = Axis::X;

    std::vector<double> phi0;  // reference state samples on the grid
    double energy0 = 0.0;      // raw E_0 before the shift to zero
    double bloch_freq = 0.0;   // omega_B

    std::vector<double> moments;  // M_p for p = 0..p_max
    int p_max() const { return static_cast<int>(moments.size()) - 1; }
    double moment(int p) const;

    std::vector<int> ladder_wells;        // interior wells, ascending
    std::vector<double> ladder_energies;  // shifted energies of those states

    std::vector<LadderState> classification;

    // diagnostics
    double first_excited_offset = 0.0;  // NaN when no second well-0 state found
    double intra_well_offset = 0.0;     // <phi_0|x|phi_0> - 1/2
    double covariance_residual = 0.0;   // worst ||phi_n - T_n phi_0|| (interior)
    double spacing_stddev = 0.0;        // stddev of consecutive ladder gaps
    double eigen_residual = 0.0;        // ||H phi_0 - E_0 phi_0||

    // phi_0(x - n) sampled on this basis' grid (zero-padded at the walls)
    std::vector<double> translated_phi(int n) const;
    // <phi_0(x-n)|f> against arbitrary samples aligned with this grid
    double dot_translated(int n, const double* f, int len) const;

    int interior_margin() const;  // wells excluded at each edge
};

// Diagonalizes the discretized Hamiltonian (LAPACK tridiagonal subset solver),
// classifies eigenstates into ladders, and extracts phi_0 and the moment
// table.  Throws std::runtime_error on ladder-identification failure and
// std::invalid_argument on parameter violations.
WannierStarkBasis solve_ws_basis(const LatticeParams& params, const GridSpec& grid,
                                 Axis axis = Axis::X, int p_max = 3);

// Recomputes the moment table for a different cutoff.
std::vector<double> coupling_moments(const WannierStarkBasis& basis, int p_max);

// Classification of raw eigenpairs (columns of `vectors`, L2-normalized) into
// {well, ladder index}; exposed separately for diagnostics and tests.
std::vector<LadderState> ladder_classification(const std::vector<double>& energies,
                                               const std::vector<double>& vectors,
                                               const LatticeParams& params,
                                               const GridSpec& grid, Axis axis);

// Tridiagonal FD Hamiltonian: diagonal and (constant) off-diagonal entries.
void fd_hamiltonian(const LatticeParams& params, const GridSpec& grid, Axis axis,
                    std::vector<double>& diag, double& off);

}  // namespace stark

#endif
