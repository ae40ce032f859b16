#ifndef STARK_LATTICE_HPP
#define STARK_LATTICE_HPP

// Static parameters of the amplitude-modulated tilted lattice, in normalized
// units: lengths in lattice periods d, energies in recoil energies E_R, time
// in hbar/E_R. The effective mass in these units is pi^2/2; it is a constant
// of the unit system, not a tunable.

#include <stdexcept>
#include <string>

namespace stark {

inline constexpr double kEffectiveMass = 4.9348022005446793;  // pi^2/2

enum class Axis { X, Y };

inline const char* axis_name(Axis a) { return a == Axis::X ? "x" : "y"; }

struct LatticeParams {
    double depth_x = 2.5;   // V_x, lattice amplitude [E_R]
    double depth_y = 2.5;   // V_y
    double force_x = 0.2;   // F_x, tilt [E_R/d]
    double force_y = 0.2;   // F_y
    double beat_k = 0.0;    // spatial-beat wavenumber (k_L - k_L')/k_L

    double depth(Axis a) const { return a == Axis::X ? depth_x : depth_y; }
    double force(Axis a) const { return a == Axis::X ? force_x : force_y; }

    // Throws if the axis cannot host a Wannier-Stark ladder.  Returns a
    // warning string (empty if none) for soft conditions.
    std::string validate(Axis a) const;
};

// Spatial box covering an integer number of lattice periods.  Wells are
// labeled by the integer n; well n occupies [n, n+1] and is centered on the
// minimum of cos(2*pi*x) at x = n + 1/2.  `origin_well` is the box-local
// index of well n = 0, so the box spans x in [-origin_well, wells_count -
// origin_well] and sample i sits at x = -origin_well + i/points_per_period.
struct GridSpec {
    int wells_count = 65;
    int points_per_period = 32;
    int origin_well = 32;

    static GridSpec centered(int wells = 65, int ppp = 32) {
        return GridSpec{wells, ppp, (wells - 1) / 2};
    }

    int samples() const { return wells_count * points_per_period; }
    double spacing() const { return 1.0 / points_per_period; }
    double x_min() const { return -static_cast<double>(origin_well); }
    double x_of(int i) const { return x_min() + i * spacing(); }
    double well_center(int n) const { return n + 0.5; }
    int n_lowest() const { return -origin_well; }
    int n_highest() const { return wells_count - 1 - origin_well; }

    void validate() const;
};

// V_x cos(2*pi*x) + F_x x  (undriven washboard along `axis`)
double potential_static(const LatticeParams& p, Axis axis, double x);
inline double potential_static(const LatticeParams& p, double x) {
    return potential_static(p, Axis::X, x);
}

// omega_B = F (normalized units); throws for F <= 0.
double bloch_frequency(const LatticeParams& p, Axis axis);
double bloch_period(const LatticeParams& p, Axis axis);  // 2*pi/omega_B

}  // namespace stark

#endif
