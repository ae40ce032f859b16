#include "stark/drive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stark {

namespace {
constexpr double kTau = 2.0 * M_PI;
}

Envelope::Envelope(double t0, double dt, std::vector<double> values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
    if (dt_ <= 0.0) throw std::invalid_argument("envelope sample step must be positive");
    rebuild_cum();
}

void Envelope::rebuild_cum() {
    cum_.assign(values_.size(), 0.0);
    for (size_t i = 1; i < values_.size(); ++i)
        cum_[i] = cum_[i - 1] + 0.5 * (values_[i - 1] + values_[i]) * dt_;
}

Envelope Envelope::constant(double level, double t0, double t1, double dt) {
    int n = std::max(1, static_cast<int>(std::lround((t1 - t0) / dt)));
    return Envelope(t0, dt, std::vector<double>(n + 1, level));
}

Envelope Envelope::pulse(double level, double t0, double t1, double ramp, double dt) {
    int n = std::max(1, static_cast<int>(std::lround((t1 - t0) / dt)));
    std::vector<double> v(n + 1, 0.0);
    double dur = t1 - t0;
    ramp = std::min(ramp, dur / 2.0);
    for (int i = 0; i <= n; ++i) {
        double t = i * dt;
        double s = 1.0;
        if (t < ramp)
            s = 0.5 * (1.0 - std::cos(M_PI * t / ramp));
        else if (t > dur - ramp)
            s = 0.5 * (1.0 - std::cos(M_PI * (dur - t) / ramp));
        v[i] = level * s;
    }
    return Envelope(t0, dt, std::move(v));
}

Envelope Envelope::cosine(double amp, double omega, double t1, double dt) {
    int n = std::max(1, static_cast<int>(std::lround(t1 / dt)));
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = amp * std::cos(omega * i * dt);
    return Envelope(0.0, dt, std::move(v));
}

double Envelope::at(double t) const {
    if (values_.empty()) return 0.0;
    double u = (t - t0_) / dt_;
    if (u < 0.0 || u > values_.size() - 1.0) return 0.0;
    int i = std::min(static_cast<int>(u), static_cast<int>(values_.size()) - 2);
    if (values_.size() == 1) return values_[0];
    double f = u - i;
    return values_[i] * (1.0 - f) + values_[i + 1] * f;
}

double Envelope::integral(double t) const {
    if (values_.size() < 2) return 0.0;
    double u = (t - t0_) / dt_;
    if (u <= 0.0) return 0.0;
    if (u >= values_.size() - 1.0) return cum_.back();
    int i = static_cast<int>(u);
    double f = u - i;
    double a0 = values_[i];
    double at_t = values_[i] * (1.0 - f) + values_[i + 1] * f;
    return cum_[i] + 0.5 * (a0 + at_t) * f * dt_;
}

double Envelope::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Envelope& Envelope::add(const Envelope& other) {
    if (other.empty()) return *this;
    if (empty()) {
        *this = other;
        return *this;
    }
    if (std::abs(dt_ - other.dt_) > 1e-12 * dt_)
        throw std::invalid_argument("cannot add envelopes with different sample steps");
    double shift = (other.t0_ - t0_) / dt_;
    long s = std::lround(shift);
    if (std::abs(shift - s) > 1e-9)
        throw std::invalid_argument("cannot add envelopes with misaligned sample grids");
    long lo = std::min(0L, s);
    long hi = std::max(static_cast<long>(values_.size()),
                       s + static_cast<long>(other.values_.size()));
    std::vector<double> merged(hi - lo, 0.0);
    for (size_t i = 0; i < values_.size(); ++i) merged[i - lo] += values_[i];
    for (size_t i = 0; i < other.values_.size(); ++i) merged[s + i - lo] += other.values_[i];
    t0_ += lo * dt_;
    values_ = std::move(merged);
    rebuild_cum();
    return *this;
}

double DriveWaveform::value(double t) const {
    return amplitude(t) * std::sin(carrier * t + beta);
}

double DriveWaveform::value_at(double u, double t) const {
    switch (profile) {
        case Profile::None:
            return value(t);
        case Profile::Beat:
            if (literal_beat)
                return amplitude(t) * std::sin(profile_k * u) *
                       (std::sin(carrier * t) + beta);
            return amplitude(t) * std::sin(profile_k * u) * std::sin(carrier * t + beta);
        case Profile::Crossed:
            throw std::logic_error("crossed drive has no separable value: use propagate_2d_full");
    }
    return 0.0;
}

std::array<double, 2> PathSegment::start_point() const {
    switch (kind) {
        case Kind::Line: return {x0, y0};
        case Kind::Arc: {
            double a = start_deg * M_PI / 180.0;
            return {cx + radius * std::cos(a), cy + radius * std::sin(a)};
        }
        case Kind::Dwell: return {x0, y0};
    }
    return {0, 0};
}

std::array<double, 2> PathSegment::end_point() const {
    switch (kind) {
        case Kind::Line: return {x1, y1};
        case Kind::Arc: {
            double a = (start_deg + sweep_deg) * M_PI / 180.0;
            return {cx + radius * std::cos(a), cy + radius * std::sin(a)};
        }
        case Kind::Dwell: return {x0, y0};
    }
    return {0, 0};
}

double PathSegment::length() const {
    switch (kind) {
        case Kind::Line: return std::hypot(x1 - x0, y1 - y0);
        case Kind::Arc: return radius * std::abs(sweep_deg) * M_PI / 180.0;
        case Kind::Dwell: return 0.0;
    }
    return 0.0;
}

void PathSpec::validate() const {
    if (segments.empty()) throw std::invalid_argument("path has no segments");
    for (size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].duration_tb <= 0.0)
            throw std::invalid_argument("path segment " + std::to_string(i) +
                                        " has non-positive duration");
        if (segments[i].kind == PathSegment::Kind::Arc && segments[i].radius <= 0.0)
            throw std::invalid_argument("arc segment " + std::to_string(i) +
                                        " has non-positive radius");
        if (i > 0) {
            auto a = segments[i - 1].end_point();
            auto b = segments[i].start_point();
            if (std::hypot(a[0] - b[0], a[1] - b[1]) > 1e-6)
                throw std::invalid_argument("path segments " + std::to_string(i - 1) +
                                            " and " + std::to_string(i) +
                                            " do not chain");
        }
    }
}

std::array<double, 2> PathSpec::start_point() const {
    return segments.front().start_point();
}

double PathSpec::total_duration_tb() const {
    double d = 0.0;
    for (const auto& s : segments) d += s.duration_tb;
    return d;
}

namespace {

// integral of the raised-cosine speed shape (0..1 plateau) over [0, t]
double shape_integral(double t, double dur, double ramp) {
    auto ramp_int = [&](double u) {  // \int_0^u (1-cos(pi s/ramp))/2 ds
        return 0.5 * (u - ramp / M_PI * std::sin(M_PI * u / ramp));
    };
    t = std::clamp(t, 0.0, dur);
    double acc = 0.0;
    double up = std::min(t, ramp);
    acc += ramp_int(up);
    if (t > ramp) acc += std::min(t, dur - ramp) - ramp;
    if (t > dur - ramp) acc += ramp_int(ramp) - ramp_int(dur - t);
    return acc;
}

double shape_value(double t, double dur, double ramp) {
    if (t < 0.0 || t > dur) return 0.0;
    if (t < ramp) return 0.5 * (1.0 - std::cos(M_PI * t / ramp));
    if (t > dur - ramp) return 0.5 * (1.0 - std::cos(M_PI * (dur - t) / ramp));
    return 1.0;
}

}  // namespace

std::pair<DriveWaveform, DriveWaveform> compile_path(const PathSpec& path,
                                                     const WannierStarkBasis& basis_x,
                                                     const WannierStarkBasis& basis_y,
                                                     const Coherence& sigma,
                                                     double alpha_max) {
    path.validate();
    const double gain_x = basis_x.moment(1) * sigma.value.real();
    const double gain_y = basis_y.moment(1) * sigma.value.real();
    if (std::abs(gain_x) < 1e-12 || std::abs(gain_y) < 1e-12)
        throw std::runtime_error("no coherence: packet cannot be driven");

    const double tb = bloch_period(basis_x.params, basis_x.axis);
    const double dt_env = tb / 10.0;

    double total = path.total_duration_tb() * tb;
    int nsamp = static_cast<int>(std::lround(total / dt_env));
    std::vector<double> ax(nsamp + 1, 0.0), ay(nsamp + 1, 0.0);

    double t_seg = 0.0;
    for (const auto& seg : path.segments) {
        const double dur = seg.duration_tb * tb;
        if (seg.kind == PathSegment::Kind::Dwell) {
            t_seg += dur;
            continue;
        }
        const double ramp = std::min(2.0 * tb, dur / 4.0);
        const double shape_total = shape_integral(dur, dur, ramp);
        const double speed = seg.length() / shape_total;  // boosted peak speed

        int i0 = static_cast<int>(std::ceil((t_seg - 1e-9) / dt_env));
        int i1 = static_cast<int>(std::floor((t_seg + dur + 1e-9) / dt_env));
        for (int i = std::max(0, i0); i <= std::min(nsamp, i1); ++i) {
            double tl = i * dt_env - t_seg;  // local time in segment
            double v = speed * shape_value(tl, dur, ramp);
            double ux, uy;
            if (seg.kind == PathSegment::Kind::Line) {
                double len = seg.length();
                ux = len > 0 ? (seg.x1 - seg.x0) / len : 0.0;
                uy = len > 0 ? (seg.y1 - seg.y0) / len : 0.0;
            } else {
                double s = speed * shape_integral(tl, dur, ramp);  // arc length
                double sgn = seg.sweep_deg >= 0 ? 1.0 : -1.0;
                double theta = seg.start_deg * M_PI / 180.0 + sgn * s / seg.radius;
                ux = -std::sin(theta) * sgn;
                uy = std::cos(theta) * sgn;
            }
            ax[i] = v * ux / gain_x;
            ay[i] = v * uy / gain_y;
        }
        t_seg += dur;
    }

    DriveWaveform wx, wy;
    wx.axis = Axis::X;
    wy.axis = Axis::Y;
    wx.carrier = bloch_frequency(basis_x.params, Axis::X);
    wy.carrier = bloch_frequency(basis_y.params, Axis::Y);
    wx.envelope = Envelope(0.0, dt_env, std::move(ax));
    wy.envelope = Envelope(0.0, dt_env, std::move(ay));
    double amax = std::max(wx.envelope.max_abs(), wy.envelope.max_abs());
    if (amax > alpha_max + 1e-12)
        throw std::runtime_error("path too fast: increase duration (needs alpha=" +
                                 std::to_string(amax) + ")");
    return {std::move(wx), std::move(wy)};
}

ValidationReport validate_waveform(const DriveWaveform& w, double omega_b,
                                   double alpha_max) {
    ValidationReport r;
    r.omega_b = omega_b;
    r.alpha_max = alpha_max;
    const auto& v = w.envelope.samples();
    const double dt = w.envelope.sample_dt();
    r.max_amplitude = w.envelope.max_abs();
    const double floor_amp = std::max(1e-3, r.max_amplitude / 4.0);
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        double rate = std::abs(v[i + 1] - v[i]) / dt;
        double amid = 0.5 * std::abs(v[i] + v[i + 1]);
        if (amid > 1e-3)
            r.max_ratio_gated = std::max(r.max_ratio_gated, rate / amid);
        r.max_ratio = std::max(r.max_ratio, rate / std::max(amid, floor_amp));
    }
    r.amplitude_ok = r.max_amplitude <= alpha_max + 1e-9;
    r.slowness_ok = r.max_ratio <= omega_b / 2.0;
    r.pass = r.amplitude_ok && r.slowness_ok;
    return r;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << "slowness ratio (smoothed gate) " << max_ratio << " vs cap " << omega_b / 2.0
       << (slowness_ok ? " [ok]" : " [FAIL]") << "; gated |a'/a| " << max_ratio_gated
       << "; max amplitude " << max_amplitude << " vs " << alpha_max
       << (amplitude_ok ? " [ok]" : " [FAIL]");
    return os.str();
}

std::vector<std::array<double, 3>> predicted_path(
    const DriveWaveform& drive_x, const DriveWaveform& drive_y,
    const WannierStarkBasis& basis_x, const WannierStarkBasis& basis_y,
    const Coherence& sigma, const std::vector<double>& times, double x0, double y0) {
    std::vector<std::array<double, 3>> out;
    out.reserve(times.size());
    const std::complex<double> s = sigma.value;
    const double gx =
        basis_x.moment(1) * (s * std::exp(std::complex<double>(0, -drive_x.beta))).real();
    const double gy =
        basis_y.moment(1) * (s * std::exp(std::complex<double>(0, -drive_y.beta))).real();
    for (double t : times)
        out.push_back({t, x0 + gx * drive_x.envelope.integral(t),
                       y0 + gy * drive_y.envelope.integral(t)});
    return out;
}

}  // namespace stark
