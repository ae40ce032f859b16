#ifndef STARK_OBSERVABLES_HPP
#define STARK_OBSERVABLES_HPP

// Measurements shared by every engine: Bloch-period-averaged centroids, total
// spatial dispersion, time-accumulated density and the principal-axis angle
// of 2D densities.

#include <string>
#include <vector>

#include "stark/grid_propagator.hpp"

namespace stark {

// Column-oriented record table; every engine writes one of these and the
// CSV layer serializes it verbatim.
struct SeriesTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    void check() const;  // times strictly increasing, dispersion >= 0
};

// Centered sliding-window mean of window T_B with linear interpolation at
// the fractional window ends; output covers [t0 + T_B/2, t1 - T_B/2].
// Requires a uniformly sampled series spanning at least one T_B.
void bloch_averaged_centroid(const std::vector<double>& times,
                             const std::vector<double>& values, double t_bloch,
                             std::vector<double>& times_out,
                             std::vector<double>& values_out);

enum class DispersionRef { Origin, Centroid };

// sqrt(<(r - ref)^2>) of a normalized 2D density
double total_dispersion(const GridWavefunction& psi2d, DispersionRef ref);
// same for a product state psi_x(x) psi_y(y)
double total_dispersion(const GridWavefunction& psi_x, const GridWavefunction& psi_y,
                        DispersionRef ref);
// incoherent ensemble of product states with equal weights
double total_dispersion(
    const std::vector<std::pair<GridWavefunction, GridWavefunction>>& packets,
    DispersionRef ref);

struct DensityImage {
    int nx = 0, ny = 1;
    double spacing = 0.0, origin_x = 0.0, origin_y = 0.0;
    std::vector<double> data;  // [ix + nx*iy], normalized to max 1
};

// trapezoidal time integral of |Psi|^2 over frames, normalized to max 1
DensityImage accumulated_density(const std::vector<DensityImage>& frames,
                                 const std::vector<double>& times);

DensityImage density_of(const GridWavefunction& psi2d);
DensityImage density_of(const GridWavefunction& psi_x, const GridWavefunction& py);

// principal-axis angle of the density covariance, in (-pi/2, pi/2]; throws
// "orientation undefined" when the eigenvalue ratio is below 1.05
double orientation_angle(const GridWavefunction& psi2d);
double orientation_angle(const DensityImage& rho);

// removes pi jumps so a rotating axis angle becomes continuous
std::vector<double> unwrap_half_turns(const std::vector<double>& angles);

}  // namespace stark

#endif
