#ifndef STARK_DRIVE_HPP
#define STARK_DRIVE_HPP

// Modulation waveforms A(t) = alpha(t) sin(omega_B t + beta) and the inverse
// problem: turning a requested 2D path into per-axis envelopes through the
// drift-velocity law v = M_1 alpha Re(sigma e^{-i beta}).

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "stark/lattice.hpp"
#include "stark/ws_basis.hpp"

namespace stark {

struct Coherence {
    std::complex<double> value{0.0, 0.0};
};

// Slow envelope alpha(t): uniformly sampled, piecewise-linear between
// samples, identically zero outside its support.  The trapezoid integral is
// exact for this representation, which is what keeps the integrator, the
// Bessel closed form and the path predictor mutually consistent.
class Envelope {
public:
    Envelope() = default;
    Envelope(double t0, double dt, std::vector<double> values);

    static Envelope constant(double level, double t0, double t1, double dt);
    // raised-cosine plateau pulse: ramps of width `ramp` inside [t0, t1]
    static Envelope pulse(double level, double t0, double t1, double ramp, double dt);
    // amp * cos(omega * t) sampled over [0, t1]
    static Envelope cosine(double amp, double omega, double t1, double dt);

    bool empty() const { return values_.empty(); }
    double t_begin() const { return t0_; }
    double t_end() const { return t0_ + dt_ * (values_.empty() ? 0 : values_.size() - 1); }
    double sample_dt() const { return dt_; }
    const std::vector<double>& samples() const { return values_; }

    double at(double t) const;
    double integral(double t) const;  // \int_{t_begin}^{min(t, t_end)} alpha
    double max_abs() const;

    // pointwise sum (supports overlapping pulses); grids must be compatible
    Envelope& add(const Envelope& other);

private:
    double t0_ = 0.0, dt_ = 1.0;
    std::vector<double> values_;
    std::vector<double> cum_;  // cumulative trapezoid at sample points
    void rebuild_cum();
};

struct DriveWaveform {
    enum class Profile { None, Beat, Crossed };

    Axis axis = Axis::X;
    Envelope envelope;
    double beta = 0.0;
    double carrier = 0.0;  // omega_B
    Profile profile = Profile::None;
    double profile_k = 0.0;
    // Reads the beat drive literally as sin(ku)*(sin(w t) + beta) instead of
    // sin(ku)*sin(w t + beta); kept as a comparison switch.
    bool literal_beat = false;

    double amplitude(double t) const { return envelope.at(t); }
    // temporal drive A(t) (no spatial profile)
    double value(double t) const;
    // full drive term A(u, t) for separable propagation (None or Beat)
    double value_at(double u, double t) const;
};

struct PathSegment {
    enum class Kind { Line, Arc, Dwell };
    Kind kind = Kind::Dwell;
    // line: (x0,y0) -> (x1,y1); arc: circle around (cx,cy), radius r, from
    // start_deg sweeping sweep_deg (positive = counterclockwise)
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double cx = 0, cy = 0, radius = 0, start_deg = 0, sweep_deg = 0;
    double duration_tb = 0;  // Bloch periods

    std::array<double, 2> start_point() const;
    std::array<double, 2> end_point() const;
    double length() const;
};

struct PathSpec {
    std::vector<PathSegment> segments;
    void validate() const;  // positive durations, endpoint chaining
    std::array<double, 2> start_point() const;
    double total_duration_tb() const;
};

// Inverts the drift-velocity law for each axis.  Each segment is traversed
// with a raised-cosine speed profile (ramp width min(2 T_B, D/4)) whose
// amplitude is boosted so the integrated envelope per segment is exact; the
// geometric path is therefore reproduced waypoint for waypoint.  Throws
// "path too fast" when a boosted amplitude exceeds alpha_max and "no
// coherence" when sigma vanishes.
std::pair<DriveWaveform, DriveWaveform> compile_path(const PathSpec& path,
                                                     const WannierStarkBasis& basis_x,
                                                     const WannierStarkBasis& basis_y,
                                                     const Coherence& sigma,
                                                     double alpha_max = 1.0);

struct ValidationReport {
    // max |dalpha/dt| / |alpha| over samples with |alpha| > 1e-3 (literal)
    double max_ratio_gated = 0.0;
    // max |dalpha/dt| / max(|alpha|, max(1e-3, max|alpha|/4)) -- smoothed gate
    double max_ratio = 0.0;
    double max_amplitude = 0.0;
    double alpha_max = 1.0;
    double omega_b = 0.0;
    bool amplitude_ok = true;
    bool slowness_ok = true;
    bool pass = true;
    std::string summary() const;
};

// Report-only slow-envelope check (smoothed gating, cap omega_B/2).
ValidationReport validate_waveform(const DriveWaveform& w, double omega_b,
                                   double alpha_max = 1.0);

// Integrates v_u(t) = M_1 alpha_u(t) Re(sigma e^{-i beta_u}) from (x0, y0);
// returns rows {t, x, y}.
std::vector<std::array<double, 3>> predicted_path(
    const DriveWaveform& drive_x, const DriveWaveform& drive_y,
    const WannierStarkBasis& basis_x, const WannierStarkBasis& basis_y,
    const Coherence& sigma, const std::vector<double>& times, double x0 = 0.0,
    double y0 = 0.0);

}  // namespace stark

#endif
