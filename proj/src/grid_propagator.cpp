#include "stark/grid_propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace stark {

using cplx = std::complex<double>;

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// FFTW plans are not thread-safe to create; execution on distinct plans is.
class Fft {
public:
    Fft(int nx, int ny, cplx* data) {
        std::lock_guard<std::mutex> lock(plan_mutex());
        auto* p = reinterpret_cast<fftw_complex*>(data);
        if (ny > 1) {
            fwd_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
            inv_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            fwd_ = fftw_plan_dft_1d(nx, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
            inv_ = fftw_plan_dft_1d(nx, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }
    ~Fft() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    void forward() const { fftw_execute(fwd_); }
    void inverse() const { fftw_execute(inv_); }

private:
    fftw_plan fwd_, inv_;
};

std::vector<double> kinetic_energies(int n, double h) {
    std::vector<double> k2(n);
    for (int i = 0; i < n; ++i) {
        double f = (i <= n / 2 ? i : i - n) / (n * h);
        double k = 2.0 * M_PI * f;
        k2[i] = k * k / (2.0 * kEffectiveMass);
    }
    return k2;
}

void check_norm(double norm, double norm0) {
    if (std::abs(norm - norm0) > 1e-7)
        throw std::runtime_error("norm drift exceeds 1e-7: step-size error");
}

void check_edges(const GridWavefunction& psi) {
    if (psi.max_edge_amplitude() > 1e-10)
        throw std::runtime_error("wavepacket reached boundary: enlarge box");
}

}  // namespace

double GridWavefunction::norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    double measure = is_2d() ? spacing * spacing : spacing;
    return std::sqrt(acc * measure);
}

double GridWavefunction::centroid_x() const {
    double acc = 0.0, w = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double rho = std::norm(values[i + static_cast<size_t>(nx) * j]);
            acc += rho * x_of(i);
            w += rho;
        }
    return acc / w;
}

double GridWavefunction::centroid_y() const {
    double acc = 0.0, w = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double rho = std::norm(values[i + static_cast<size_t>(nx) * j]);
            acc += rho * y_of(j);
            w += rho;
        }
    return acc / w;
}

double GridWavefunction::max_edge_amplitude(int edge_wells) const {
    int band_x = std::min(nx / 2, static_cast<int>(std::lround(edge_wells / spacing)));
    double m = 0.0;
    if (!is_2d()) {
        for (int i = 0; i < band_x; ++i) {
            m = std::max(m, std::abs(values[i]));
            m = std::max(m, std::abs(values[nx - 1 - i]));
        }
        return m;
    }
    int band_y = std::min(ny / 2, static_cast<int>(std::lround(edge_wells / spacing)));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            bool edge = i < band_x || i >= nx - band_x || j < band_y || j >= ny - band_y;
            if (edge) m = std::max(m, std::abs(values[i + static_cast<size_t>(nx) * j]));
        }
    return m;
}

GridWavefunction grid_from_box(const GridSpec& box) {
    box.validate();
    GridWavefunction g;
    g.nx = box.samples();
    g.ny = 1;
    g.spacing = box.spacing();
    g.origin_x = box.x_min();
    g.values.assign(g.nx, cplx{0.0, 0.0});
    return g;
}

GridWavefunction grid_from_boxes(const GridSpec& bx, const GridSpec& by) {
    bx.validate();
    by.validate();
    if (bx.points_per_period != by.points_per_period)
        throw std::invalid_argument("2D box axes must share points_per_period");
    GridWavefunction g;
    g.nx = bx.samples();
    g.ny = by.samples();
    g.spacing = bx.spacing();
    g.origin_x = bx.x_min();
    g.origin_y = by.x_min();
    g.values.assign(static_cast<size_t>(g.nx) * g.ny, cplx{0.0, 0.0});
    return g;
}

GridWavefunction product_state(const GridWavefunction& px, const GridWavefunction& py) {
    if (px.is_2d() || py.is_2d())
        throw std::invalid_argument("product_state takes two 1D factors");
    GridWavefunction g;
    g.nx = px.nx;
    g.ny = py.nx;
    g.spacing = px.spacing;
    g.origin_x = px.origin_x;
    g.origin_y = py.origin_x;
    g.time = px.time;
    g.values.resize(static_cast<size_t>(g.nx) * g.ny);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            g.values[i + static_cast<size_t>(g.nx) * j] = px.values[i] * py.values[j];
    return g;
}

GridWavefunction synthesize(const WannierStarkBasis& basis, const CoefficientState& coeffs) {
    return synthesize(basis, coeffs, basis.grid);
}

GridWavefunction synthesize(const WannierStarkBasis& basis, const CoefficientState& coeffs,
                            const GridSpec& box) {
    if (box.points_per_period != basis.grid.points_per_period)
        throw std::invalid_argument("synthesis box must share the basis sampling");
    GridWavefunction g = grid_from_box(box);
    g.time = coeffs.time;
    const int ppp = box.points_per_period;
    const int n_basis = basis.grid.samples();
    const double wb = basis.bloch_freq;
    const double v_m0 = basis.params.depth(basis.axis) * basis.moment(0);

    // sample index offset between the target box and the basis box
    const long base_off =
        std::lround((box.x_min() - basis.grid.x_min()) * ppp);

    for (int n = coeffs.n_min; n <= coeffs.n_max(); ++n) {
        cplx c = coeffs.amp(n);
        if (std::abs(c) < 1e-15) continue;
        if (n < box.n_lowest() + 2 || n > box.n_highest() - 2)
            throw std::invalid_argument("coefficient window exceeds the box interior");
        const double phase = -n * wb * coeffs.time - v_m0 * coeffs.phase_accum;
        const cplx f = c * std::polar(1.0, phase);
        const long shift = static_cast<long>(n) * ppp - base_off;  // basis i -> box i+shift
        const long i_lo = std::max(0L, -shift);
        const long i_hi = std::min(static_cast<long>(n_basis), g.nx - shift);
        for (long i = i_lo; i < i_hi; ++i)
            g.values[i + shift] += f * basis.phi0[i];
    }
    return g;
}

ProjectionResult project(const WannierStarkBasis& basis, const GridWavefunction& psi,
                         double phase_accum) {
    if (psi.is_2d()) throw std::invalid_argument("project takes a 1D wavefunction");
    if (std::abs(psi.spacing - basis.grid.spacing()) > 1e-12)
        throw std::invalid_argument("projection requires matching grid spacing");
    const int ppp = basis.grid.points_per_period;
    const int n_basis = basis.grid.samples();
    const double wb = basis.bloch_freq;
    const double v_m0 = basis.params.depth(basis.axis) * basis.moment(0);
    const long base_off = std::lround((psi.origin_x - basis.grid.x_min()) * ppp);

    const int n_lo = static_cast<int>(std::ceil(psi.origin_x)) + 1;
    const int n_hi = static_cast<int>(std::floor(psi.origin_x + psi.nx * psi.spacing)) - 2;

    ProjectionResult out;
    out.coeffs.n_min = n_lo;
    out.coeffs.time = psi.time;
    out.coeffs.phase_accum = phase_accum;
    out.coeffs.amps.assign(n_hi - n_lo + 1, cplx{0.0, 0.0});
    for (int n = n_lo; n <= n_hi; ++n) {
        const long shift = static_cast<long>(n) * ppp - base_off;
        const long i_lo = std::max(0L, -shift);
        const long i_hi = std::min(static_cast<long>(n_basis),
                                   static_cast<long>(psi.nx) - shift);
        cplx acc{0.0, 0.0};
        for (long i = i_lo; i < i_hi; ++i)
            acc += basis.phi0[i] * psi.values[i + shift];
        acc *= psi.spacing;
        const double phase = -n * wb * psi.time - v_m0 * phase_accum;
        out.coeffs.amps[n - n_lo] = acc * std::polar(1.0, -phase);
    }
    out.leakage = 1.0 - out.coeffs.norm();
    out.coeffs.trim();
    return out;
}

namespace {

// shared driver for 1D propagation with merged spectral steps
void run_1d(GridWavefunction& psi, const LatticeParams& params, Axis axis,
            const DriveWaveform& drive, double t_end, double dt, double sample_dt,
            const SampleSink& sink) {
    if (drive.profile == DriveWaveform::Profile::Crossed)
        throw std::invalid_argument("non-separable drive: use propagate_2d_full");
    const double tb = bloch_period(params, axis);
    if (dt > tb / 500.0 + 1e-12)
        throw std::invalid_argument("propagation requires dt <= T_B/500");
    check_edges(psi);

    const int n = psi.nx;
    const double h = psi.spacing;
    const double v = params.depth(axis);
    const double f = params.force(axis);
    const double w = bloch_frequency(params, axis);
    const int ppp = static_cast<int>(std::lround(1.0 / h));

    long nsteps = std::lround((t_end - psi.time) / dt);
    if (nsteps < 1) nsteps = 0;
    long msteps = sample_dt > 0 ? std::max(1L, std::lround(sample_dt / dt)) : nsteps;

    const double norm0 = psi.norm();
    std::vector<double> k2 = kinetic_energies(n, h);
    std::vector<cplx> ek_full(n), ek_half(n);
    const double inv_n = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        ek_full[i] = std::polar(inv_n, -k2[i] * dt);
        ek_half[i] = std::polar(inv_n, -k2[i] * dt / 2.0);
    }
    // static part of the potential phase and drive geometry
    std::vector<cplx> stat(n);
    std::vector<double> cosx(n), gprof(n);
    const bool beat = drive.profile == DriveWaveform::Profile::Beat;
    for (int i = 0; i < n; ++i) {
        double x = psi.x_of(i);
        cosx[i] = std::cos(2.0 * M_PI * x);
        stat[i] = std::polar(1.0, -dt * (v * cosx[i] + f * x));
        gprof[i] = beat ? std::sin(drive.profile_k * x) * cosx[i] : cosx[i];
    }
    std::vector<cplx> lut(ppp);

    Fft fft(n, 1, psi.values.data());
    double integral_a = 0.0;
    long done = 0;
    if (sink) sink(psi, integral_a);
    while (done < nsteps) {
        long block = std::min(msteps, nsteps - done);
        fft.forward();
        for (int i = 0; i < n; ++i) psi.values[i] *= ek_half[i];
        for (long s = 0; s < block; ++s) {
            const double tm = psi.time + 0.5 * dt;
            // scalar drive factor at midpoint
            double a;
            if (beat)
                a = drive.literal_beat
                        ? drive.amplitude(tm) * (std::sin(w * tm) + drive.beta)
                        : drive.amplitude(tm) * std::sin(w * tm + drive.beta);
            else
                a = drive.value(tm);
            fft.inverse();
            if (beat) {
                for (int i = 0; i < n; ++i)
                    psi.values[i] *= stat[i] * std::polar(1.0, -dt * a * gprof[i]);
            } else {
                for (int i = 0; i < ppp; ++i) lut[i] = std::polar(1.0, -dt * a * cosx[i]);
                for (int i = 0; i < n; ++i) psi.values[i] *= stat[i] * lut[i % ppp];
                integral_a += a * dt;
            }
            fft.forward();
            const auto& ek = (s + 1 < block) ? ek_full : ek_half;
            for (int i = 0; i < n; ++i) psi.values[i] *= ek[i];
            psi.time += dt;
        }
        fft.inverse();
        done += block;
        check_norm(psi.norm(), norm0);
        check_edges(psi);
        if (sink) sink(psi, integral_a);
    }
}

}  // namespace

void propagate_1d(GridWavefunction& psi, const LatticeParams& params, Axis axis,
                  const DriveWaveform& drive, double t_end, double dt,
                  double sample_dt, const SampleSink& sink) {
    run_1d(psi, params, axis, drive, t_end, dt, sample_dt, sink);
}

void propagate_2d_separable(GridWavefunction& psi_x, GridWavefunction& psi_y,
                            const LatticeParams& params, const DriveWaveform& drive_x,
                            const DriveWaveform& drive_y, double t_end, double dt,
                            double sample_dt, const PairSampleSink& sink) {
    if (drive_x.profile == DriveWaveform::Profile::Crossed ||
        drive_y.profile == DriveWaveform::Profile::Crossed)
        throw std::invalid_argument("non-separable drive: use propagate_2d_full");
    // march the two axes sample block by sample block so the sink sees
    // synchronized states
    double t0 = psi_x.time;
    if (std::abs(psi_y.time - t0) > 1e-12)
        throw std::invalid_argument("separable propagation requires synchronized factors");
    if (sample_dt <= 0) sample_dt = t_end - t0;
    double ia_x = 0.0, ia_y = 0.0;
    if (sink) sink(psi_x, psi_y, ia_x, ia_y);
    double t = t0;
    while (t < t_end - 1e-9) {
        double t_next = std::min(t + sample_dt, t_end);
        double last_x = 0, last_y = 0;
        run_1d(psi_x, params, Axis::X, drive_x, t_next, dt, 0.0,
               [&](const GridWavefunction&, double ia) { last_x = ia; });
        run_1d(psi_y, params, Axis::Y, drive_y, t_next, dt, 0.0,
               [&](const GridWavefunction&, double ia) { last_y = ia; });
        ia_x += last_x;
        ia_y += last_y;
        t = t_next;
        if (sink) sink(psi_x, psi_y, ia_x, ia_y);
    }
}

void propagate_2d_full(GridWavefunction& psi, const LatticeParams& params,
                       const DriveWaveform& drive_x, const DriveWaveform& drive_y,
                       double t_end, double dt, double sample_dt, const SampleSink& sink) {
    if (!psi.is_2d()) throw std::invalid_argument("propagate_2d_full needs a 2D state");
    if (psi.values.size() > (1ull << 25))
        throw std::invalid_argument("2D grid too large (memory guard)");
    const double tb = bloch_period(params, Axis::X);
    if (dt > tb / 500.0 + 1e-12)
        throw std::invalid_argument("propagation requires dt <= T_B/500");
    check_edges(psi);

    const int nx = psi.nx, ny = psi.ny;
    const double h = psi.spacing;
    const double wx = bloch_frequency(params, Axis::X);
    const double wy = bloch_frequency(params, Axis::Y);
    const bool crossed = drive_x.profile == DriveWaveform::Profile::Crossed;
    if (crossed != (drive_y.profile == DriveWaveform::Profile::Crossed))
        throw std::invalid_argument("crossed profile must be set on both axes");

    long nsteps = std::lround((t_end - psi.time) / dt);
    if (nsteps < 1) nsteps = 0;
    long msteps = sample_dt > 0 ? std::max(1L, std::lround(sample_dt / dt)) : nsteps;

    const double norm0 = psi.norm();
    std::vector<double> k2x = kinetic_energies(nx, h), k2y = kinetic_energies(ny, h);
    std::vector<cplx> ekx_f(nx), ekx_h(nx), eky_f(ny), eky_h(ny);
    const double inv_nx = 1.0 / nx, inv_ny = 1.0 / ny;
    for (int i = 0; i < nx; ++i) {
        ekx_f[i] = std::polar(inv_nx, -k2x[i] * dt);
        ekx_h[i] = std::polar(inv_nx, -k2x[i] * dt / 2.0);
    }
    for (int j = 0; j < ny; ++j) {
        eky_f[j] = std::polar(inv_ny, -k2y[j] * dt);
        eky_h[j] = std::polar(inv_ny, -k2y[j] * dt / 2.0);
    }

    // static potential phase (separable factors)
    std::vector<cplx> statx(nx), staty(ny);
    std::vector<double> cosx(nx), cosy(ny), skx(nx), sky(ny);
    const double k = crossed ? drive_x.profile_k : 0.0;
    for (int i = 0; i < nx; ++i) {
        double x = psi.x_of(i);
        cosx[i] = std::cos(2.0 * M_PI * x);
        skx[i] = std::sin(k * x);
        statx[i] = std::polar(1.0, -dt * (params.depth_x * cosx[i] + params.force_x * x));
    }
    for (int j = 0; j < ny; ++j) {
        double y = psi.y_of(j);
        cosy[j] = std::cos(2.0 * M_PI * y);
        sky[j] = std::sin(k * y);
        staty[j] = std::polar(1.0, -dt * (params.depth_y * cosy[j] + params.force_y * y));
    }

    Fft fft(nx, ny, psi.values.data());

    auto apply_kinetic = [&](const std::vector<cplx>& ekx, const std::vector<cplx>& eky) {
        for (int j = 0; j < ny; ++j) {
            const cplx fy = eky[j];
            cplx* row = &psi.values[static_cast<size_t>(nx) * j];
            for (int i = 0; i < nx; ++i) row[i] *= ekx[i] * fy;
        }
    };

    auto apply_potential = [&](double tm) {
        if (crossed) {
            // A_x = -a_x sin(k y) sin(w t + b_x); A_y = +a_y sin(k x) sin(w t + b_y)
            const double sx = -drive_x.amplitude(tm) * std::sin(wx * tm + drive_x.beta);
            const double sy = drive_y.amplitude(tm) * std::sin(wy * tm + drive_y.beta);
            for (int j = 0; j < ny; ++j) {
                const double ay = dt * sx * sky[j];  // multiplies cos(2 pi x)
                const cplx fy = staty[j];
                cplx* row = &psi.values[static_cast<size_t>(nx) * j];
                for (int i = 0; i < nx; ++i) {
                    const double th = ay * cosx[i] + dt * sy * skx[i] * cosy[j];
                    row[i] *= statx[i] * fy * std::polar(1.0, -th);
                }
            }
        } else {
            // separable (uniform or beat) drive terms
            auto scal = [&](const DriveWaveform& d, double wcar) {
                if (d.profile == DriveWaveform::Profile::Beat && d.literal_beat)
                    return d.amplitude(tm) * (std::sin(wcar * tm) + d.beta);
                if (d.profile == DriveWaveform::Profile::Beat)
                    return d.amplitude(tm) * std::sin(wcar * tm + d.beta);
                return d.value(tm);
            };
            const double ax = scal(drive_x, wx), ay = scal(drive_y, wy);
            const bool bx = drive_x.profile == DriveWaveform::Profile::Beat;
            const bool by = drive_y.profile == DriveWaveform::Profile::Beat;
            std::vector<cplx> px(nx), py(ny);
            for (int i = 0; i < nx; ++i)
                px[i] = statx[i] *
                        std::polar(1.0, -dt * ax * (bx ? std::sin(drive_x.profile_k * psi.x_of(i)) : 1.0) * cosx[i]);
            for (int j = 0; j < ny; ++j)
                py[j] = staty[j] *
                        std::polar(1.0, -dt * ay * (by ? std::sin(drive_y.profile_k * psi.y_of(j)) : 1.0) * cosy[j]);
            for (int j = 0; j < ny; ++j) {
                const cplx fy = py[j];
                cplx* row = &psi.values[static_cast<size_t>(nx) * j];
                for (int i = 0; i < nx; ++i) row[i] *= px[i] * fy;
            }
        }
    };

    long done = 0;
    if (sink) sink(psi, 0.0);
    while (done < nsteps) {
        long block = std::min(msteps, nsteps - done);
        fft.forward();
        apply_kinetic(ekx_h, eky_h);
        for (long s = 0; s < block; ++s) {
            fft.inverse();
            apply_potential(psi.time + 0.5 * dt);
            fft.forward();
            if (s + 1 < block)
                apply_kinetic(ekx_f, eky_f);
            else
                apply_kinetic(ekx_h, eky_h);
            psi.time += dt;
        }
        fft.inverse();
        done += block;
        check_norm(psi.norm(), norm0);
        check_edges(psi);
        if (sink) sink(psi, 0.0);
    }
}

}  // namespace stark
