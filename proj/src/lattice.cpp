#include "stark/lattice.hpp"

#include <cmath>

namespace stark {

std::string LatticeParams::validate(Axis a) const {
    if (depth(a) <= 0.0)
        throw std::invalid_argument(std::string("lattice depth V_") + axis_name(a) +
                                    " must be positive");
    if (force(a) <= 0.0)
        throw std::invalid_argument(std::string("no Wannier-Stark ladder: F_") +
                                    axis_name(a) + " must be positive");
    if (std::abs(beat_k) > 0.1)
        throw std::invalid_argument("beat_k exceeds 0.1: outside linearization regime");
    if (std::abs(beat_k) > 0.05)
        return "warning: |beat_k| > 0.05, sin(ku) linearization degrades";
    return {};
}

void GridSpec::validate() const {
    if (points_per_period < 16)
        throw std::invalid_argument("points_per_period must be >= 16");
    if (points_per_period % 2 != 0)
        throw std::invalid_argument("points_per_period must be even (well centers on samples)");
    if (wells_count < 3 || wells_count % 2 == 0)
        throw std::invalid_argument("wells_count must be odd and >= 3");
    if (origin_well < 0 || origin_well >= wells_count)
        throw std::invalid_argument("origin_well outside the box");
}

double potential_static(const LatticeParams& p, Axis axis, double x) {
    return p.depth(axis) * std::cos(2.0 * M_PI * x) + p.force(axis) * x;
}

double bloch_frequency(const LatticeParams& p, Axis axis) {
    double f = p.force(axis);
    if (f <= 0.0)
        throw std::invalid_argument(std::string("no Wannier-Stark ladder: F_") +
                                    axis_name(axis) + " <= 0");
    return f;
}

double bloch_period(const LatticeParams& p, Axis axis) {
    return 2.0 * M_PI / bloch_frequency(p, axis);
}

}  // namespace stark
