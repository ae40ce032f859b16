#include "stark/coeff_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stark {

using cplx = std::complex<double>;

std::complex<double> CoefficientState::amp(int n) const {
    int i = n - n_min;
    if (i < 0 || i >= static_cast<int>(amps.size())) return {0.0, 0.0};
    return amps[i];
}

double CoefficientState::norm() const {
    double s = 0.0;
    for (const auto& c : amps) s += std::norm(c);
    return s;
}

void CoefficientState::normalize() {
    double n = std::sqrt(norm());
    if (n == 0.0) throw std::runtime_error("cannot normalize a zero state");
    for (auto& c : amps) c /= n;
}

void CoefficientState::ensure_margin(double threshold, int growth) {
    bool grow_lo = !amps.empty() && std::abs(amps.front()) > threshold;
    bool grow_hi = !amps.empty() && std::abs(amps.back()) > threshold;
    if (!grow_lo && !grow_hi) return;
    int lo = grow_lo ? growth : 0, hi = grow_hi ? growth : 0;
    std::vector<cplx> next(amps.size() + lo + hi, cplx{0.0, 0.0});
    std::copy(amps.begin(), amps.end(), next.begin() + lo);
    amps = std::move(next);
    n_min -= lo;
}

void CoefficientState::trim(double threshold) {
    size_t lo = 0, hi = amps.size();
    while (lo < hi && std::abs(amps[lo]) < threshold) ++lo;
    while (hi > lo && std::abs(amps[hi - 1]) < threshold) --hi;
    if (lo == 0 && hi == amps.size()) return;
    amps = std::vector<cplx>(amps.begin() + lo, amps.begin() + hi);
    n_min += static_cast<int>(lo);
}

CoefficientState init_gaussian(double width, int center) {
    if (width <= 0.0) throw std::invalid_argument("gaussian width must be positive");
    int pad = static_cast<int>(std::ceil(4.8 * width)) + 4;
    CoefficientState s;
    s.n_min = center - pad;
    s.amps.resize(2 * pad + 1);
    for (int i = 0; i <= 2 * pad; ++i) {
        double d = s.n_min + i - center;
        s.amps[i] = std::exp(-d * d / (width * width));
    }
    s.normalize();
    return s;
}

Coherence coherence(const CoefficientState& s) {
    cplx acc{0.0, 0.0};
    for (size_t i = 0; i + 1 < s.amps.size(); ++i)
        acc += std::conj(s.amps[i]) * s.amps[i + 1];
    return Coherence{acc};
}

double mean_position_coeffs(const CoefficientState& s) {
    double acc = 0.0;
    for (size_t i = 0; i < s.amps.size(); ++i)
        acc += (s.n_min + static_cast<int>(i)) * std::norm(s.amps[i]);
    return acc;
}

double position_variance_coeffs(const CoefficientState& s) {
    double mu = mean_position_coeffs(s);
    double acc = 0.0;
    for (size_t i = 0; i < s.amps.size(); ++i) {
        double d = s.n_min + static_cast<int>(i) - mu;
        acc += d * d * std::norm(s.amps[i]);
    }
    return acc;
}

double drift_velocity(const WannierStarkBasis& basis, double alpha, double beta,
                      const Coherence& sigma) {
    return basis.moment(1) * alpha * (sigma.value * std::exp(cplx(0, -beta))).real();
}

double diffusion_metric(const WannierStarkBasis& basis, double alpha, double beta,
                        const Coherence& sigma) {
    return basis.moment(1) * alpha * (sigma.value * std::exp(cplx(0, -beta))).imag();
}

namespace {

// RK4 over the window with a generic right-hand side; the rhs writes dc into
// a scratch buffer of the same size.
template <typename Rhs>
void rk4_run(CoefficientState& state, double t_end, double dt, Rhs&& rhs,
             const DriveWaveform* accum_drive) {
    if (t_end <= state.time) return;
    long nsteps = std::lround((t_end - state.time) / dt);
    if (nsteps < 1) nsteps = 1;
    dt = (t_end - state.time) / nsteps;

    std::vector<cplx> k1, k2, k3, k4, tmp;
    for (long s = 0; s < nsteps; ++s) {
        state.ensure_margin();
        const size_t n = state.amps.size();
        k1.assign(n, {});
        k2.assign(n, {});
        k3.assign(n, {});
        k4.assign(n, {});
        tmp.assign(n, {});
        const double t = state.time;
        double n0 = state.norm();

        rhs(t, state.amps, state.n_min, k1);
        for (size_t i = 0; i < n; ++i) tmp[i] = state.amps[i] + 0.5 * dt * k1[i];
        rhs(t + 0.5 * dt, tmp, state.n_min, k2);
        for (size_t i = 0; i < n; ++i) tmp[i] = state.amps[i] + 0.5 * dt * k2[i];
        rhs(t + 0.5 * dt, tmp, state.n_min, k3);
        for (size_t i = 0; i < n; ++i) tmp[i] = state.amps[i] + dt * k3[i];
        rhs(t + dt, tmp, state.n_min, k4);
        for (size_t i = 0; i < n; ++i)
            state.amps[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        if (accum_drive) {
            // Simpson on the same stage times keeps the accumulated \int A
            // at the integrator's own order
            state.phase_accum += dt / 6.0 *
                                 (accum_drive->value(t) + 4.0 * accum_drive->value(t + 0.5 * dt) +
                                  accum_drive->value(t + dt));
        }
        state.time += dt;
        if (std::abs(state.norm() - n0) > 1e-8)
            throw std::runtime_error("norm drift exceeds 1e-8 per step: reduce dt");
    }
}

}  // namespace

void evolve_full(CoefficientState& state, const WannierStarkBasis& basis,
                 const DriveWaveform& drive, double t_end, double dt) {
    const double tb = 2.0 * M_PI / basis.bloch_freq;
    if (dt > tb / 200.0 + 1e-12)
        throw std::invalid_argument("evolve_full requires dt <= T_B/200");
    if (drive.profile != DriveWaveform::Profile::None)
        throw std::invalid_argument("coefficient dynamics takes uniform drives only");
    const int pmax = basis.p_max();
    const double wb = basis.bloch_freq;
    std::vector<double> mp(pmax + 1);
    for (int p = 0; p <= pmax; ++p) mp[p] = basis.moment(p);

    auto rhs = [&](double t, const std::vector<cplx>& c, int, std::vector<cplx>& dc) {
        const double a = drive.value(t);
        const int n = static_cast<int>(c.size());
        for (int i = 0; i < n; ++i) dc[i] = cplx{0.0, 0.0};
        for (int p = 1; p <= pmax; ++p) {
            const cplx e_minus = std::polar(1.0, -p * wb * t);  // e^{-i p w t}
            const cplx e_plus = std::conj(e_minus);
            for (int i = 0; i < n; ++i) {
                cplx acc{0.0, 0.0};
                if (i + p < n) acc += mp[p] * e_minus * c[i + p];
                if (i - p >= 0) acc += mp[p] * e_plus * c[i - p];
                dc[i] += cplx(0.0, -a) * acc;
            }
        }
    };
    rk4_run(state, t_end, dt, rhs, &drive);
}

void evolve_rwa(CoefficientState& state, const WannierStarkBasis& basis,
                const Envelope& alpha, double beta, double t_end, double dt) {
    const double m1 = basis.moment(1);
    const cplx em = std::polar(1.0, -beta), ep = std::polar(1.0, beta);
    DriveWaveform accum;
    accum.envelope = alpha;
    accum.beta = beta;
    accum.carrier = basis.bloch_freq;

    auto rhs = [&](double t, const std::vector<cplx>& c, int, std::vector<cplx>& dc) {
        const double g = 0.5 * m1 * alpha.at(t);
        const int n = static_cast<int>(c.size());
        for (int i = 0; i < n; ++i) {
            cplx lo = i > 0 ? c[i - 1] : cplx{};
            cplx hi = i + 1 < n ? c[i + 1] : cplx{};
            dc[i] = g * (lo * em - hi * ep);
        }
    };
    rk4_run(state, t_end, dt, rhs, &accum);
}

std::vector<double> bessel_j_table(double z, int pmax) {
    std::vector<double> out(pmax + 1, 0.0);
    const double az = std::abs(z);
    if (az < 1e-14) {
        out[0] = 1.0;
        return out;
    }
    // downward recurrence from well above both pmax and the turning point
    int start = std::max(pmax, static_cast<int>(az + 12.0 * std::cbrt(az) + 20.0)) + 16;
    if (start % 2) ++start;
    double jp1 = 0.0, j = 1e-300;
    double sum = 0.0;  // J_0 + 2 sum J_2k
    std::vector<double> keep(pmax + 1, 0.0);
    for (int p = start; p >= 1; --p) {
        double jm1 = (2.0 * p / az) * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::abs(j) > 1e250) {  // rescale to avoid overflow
            double f = 1e-250;
            j *= f;
            jp1 *= f;
            sum *= f;
            for (auto& k : keep) k *= f;
        }
        int order = p - 1;
        if (order <= pmax) keep[order] = j;
        if (order > 0 && order % 2 == 0) sum += 2.0 * j;
    }
    sum += j;  // J_0
    for (int p = 0; p <= pmax; ++p) out[p] = keep[p] / sum;
    if (z < 0.0)
        for (int p = 1; p <= pmax; p += 2) out[p] = -out[p];
    return out;
}

CoefficientState bessel_solution(const CoefficientState& initial,
                                 const WannierStarkBasis& basis,
                                 const Envelope& alpha, double beta, double t) {
    const double z = -basis.moment(1) * alpha.integral(t);
    int pmax = static_cast<int>(std::abs(z) + 12.0 * std::cbrt(std::abs(z) + 1.0)) + 24;
    std::vector<double> j = bessel_j_table(z, pmax);
    int cutoff = pmax;
    while (cutoff > 0 && std::abs(j[cutoff]) < 1e-14) --cutoff;

    CoefficientState out;
    out.time = t;
    out.n_min = initial.n_min - cutoff;
    out.amps.assign(initial.amps.size() + 2 * cutoff, cplx{0.0, 0.0});
    for (int n = out.n_min; n <= out.n_max(); ++n) {
        cplx acc{0.0, 0.0};
        for (int p = -cutoff; p <= cutoff; ++p) {
            cplx c0 = initial.amp(n + p);
            if (c0 == cplx{0.0, 0.0}) continue;
            double jp = j[std::abs(p)];
            if (p < 0 && (p & 1)) jp = -jp;
            acc += c0 * std::polar(1.0, p * beta) * jp;
        }
        out.amps[n - out.n_min] = acc;
    }
    // exact piecewise-linear integral of A(t') = a(t') sin(w t' + beta)
    {
        const double w = basis.bloch_freq;
        double acc = 0.0;
        const auto& v = alpha.samples();
        const double dte = alpha.sample_dt();
        const double t0 = alpha.t_begin();
        for (size_t i = 0; i + 1 < v.size(); ++i) {
            double ta = t0 + i * dte;
            double tb2 = std::min(t0 + (i + 1) * dte, t);
            if (tb2 <= ta) break;
            // \int (a0 + m (s-ta)) sin(w s + beta) ds
            double m = (v[i + 1] - v[i]) / dte;
            auto F = [&](double s) {
                return -(v[i] + m * (s - ta)) * std::cos(w * s + beta) / w +
                       m * std::sin(w * s + beta) / (w * w);
            };
            acc += F(tb2) - F(ta);
        }
        out.phase_accum = acc;
    }
    out.trim();
    return out;
}

}  // namespace stark
