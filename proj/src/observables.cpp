#include "stark/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stark {

int SeriesTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw std::out_of_range("no column named " + name);
}

std::vector<double> SeriesTable::column(const std::string& name) const {
    int idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(idx));
    return out;
}

void SeriesTable::check() const {
    int ti = column_index("t");
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i][ti] <= rows[i - 1][ti])
            throw std::runtime_error("series times are not strictly increasing");
    for (const auto& name : columns)
        if (name == "dispersion")
            for (const auto& r : rows)
                if (r[column_index(name)] < 0.0)
                    throw std::runtime_error("negative dispersion in series");
}

void bloch_averaged_centroid(const std::vector<double>& times,
                             const std::vector<double>& values, double t_bloch,
                             std::vector<double>& times_out,
                             std::vector<double>& values_out) {
    times_out.clear();
    values_out.clear();
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("averaging needs a sampled series");
    const double dt = times[1] - times[0];
    for (size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("averaging needs uniform sampling");
    if (times.back() - times.front() < t_bloch - 1e-9)
        throw std::invalid_argument("series shorter than one Bloch period");

    // cumulative trapezoid at sample points
    std::vector<double> cum(times.size(), 0.0);
    for (size_t i = 1; i < times.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (values[i] + values[i - 1]) * dt;
    auto integral_to = [&](double t) {
        double u = (t - times.front()) / dt;
        u = std::clamp(u, 0.0, static_cast<double>(times.size() - 1));
        size_t i = std::min(static_cast<size_t>(u), times.size() - 2);
        double f = u - i;
        double vt = values[i] * (1.0 - f) + values[i + 1] * f;
        return cum[i] + 0.5 * (values[i] + vt) * f * dt;
    };

    for (size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        if (t - t_bloch / 2.0 < times.front() - 1e-12) continue;
        if (t + t_bloch / 2.0 > times.back() + 1e-12) continue;
        times_out.push_back(t);
        values_out.push_back(
            (integral_to(t + t_bloch / 2.0) - integral_to(t - t_bloch / 2.0)) / t_bloch);
    }
}

namespace {

struct Moments {
    double w = 0, mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
};

Moments grid_moments(const GridWavefunction& g) {
    Moments m;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double rho = std::norm(g.values[i + static_cast<size_t>(g.nx) * j]);
            double x = g.x_of(i), y = g.is_2d() ? g.y_of(j) : 0.0;
            m.w += rho;
            m.mx += rho * x;
            m.my += rho * y;
            m.mxx += rho * x * x;
            m.myy += rho * y * y;
            m.mxy += rho * x * y;
        }
    return m;
}

Moments pair_moments(const GridWavefunction& px, const GridWavefunction& py) {
    // product state: 2D moments factorize into 1D moments
    Moments a = grid_moments(px), b = grid_moments(py);
    Moments m;
    m.w = a.w * b.w;
    m.mx = a.mx * b.w;
    m.my = b.mx * a.w;
    m.mxx = a.mxx * b.w;
    m.myy = b.mxx * a.w;
    m.mxy = a.mx * b.mx;
    return m;
}

double dispersion_from(const Moments& m, DispersionRef ref) {
    double x0 = 0.0, y0 = 0.0;
    if (ref == DispersionRef::Centroid) {
        x0 = m.mx / m.w;
        y0 = m.my / m.w;
    }
    double r2 = (m.mxx - 2 * x0 * m.mx + x0 * x0 * m.w +
                 m.myy - 2 * y0 * m.my + y0 * y0 * m.w) /
                m.w;
    return std::sqrt(std::max(0.0, r2));
}

}  // namespace

double total_dispersion(const GridWavefunction& psi2d, DispersionRef ref) {
    return dispersion_from(grid_moments(psi2d), ref);
}

double total_dispersion(const GridWavefunction& psi_x, const GridWavefunction& psi_y,
                        DispersionRef ref) {
    return dispersion_from(pair_moments(psi_x, psi_y), ref);
}

double total_dispersion(
    const std::vector<std::pair<GridWavefunction, GridWavefunction>>& packets,
    DispersionRef ref) {
    if (packets.empty()) throw std::invalid_argument("empty ensemble");
    // equal-weight mixture: average the raw moments, then reduce
    Moments acc;
    for (const auto& [px, py] : packets) {
        Moments m = pair_moments(px, py);
        acc.w += m.w;
        acc.mx += m.mx;
        acc.my += m.my;
        acc.mxx += m.mxx;
        acc.myy += m.myy;
        acc.mxy += m.mxy;
    }
    return dispersion_from(acc, ref);
}

DensityImage density_of(const GridWavefunction& psi2d) {
    DensityImage img;
    img.nx = psi2d.nx;
    img.ny = psi2d.ny;
    img.spacing = psi2d.spacing;
    img.origin_x = psi2d.origin_x;
    img.origin_y = psi2d.origin_y;
    img.data.resize(psi2d.values.size());
    for (size_t i = 0; i < psi2d.values.size(); ++i) img.data[i] = std::norm(psi2d.values[i]);
    return img;
}

DensityImage density_of(const GridWavefunction& px, const GridWavefunction& py) {
    DensityImage img;
    img.nx = px.nx;
    img.ny = py.nx;
    img.spacing = px.spacing;
    img.origin_x = px.origin_x;
    img.origin_y = py.origin_x;
    img.data.resize(static_cast<size_t>(img.nx) * img.ny);
    for (int j = 0; j < img.ny; ++j) {
        double ry = std::norm(py.values[j]);
        for (int i = 0; i < img.nx; ++i)
            img.data[i + static_cast<size_t>(img.nx) * j] = std::norm(px.values[i]) * ry;
    }
    return img;
}

DensityImage accumulated_density(const std::vector<DensityImage>& frames,
                                 const std::vector<double>& times) {
    if (frames.empty()) throw std::invalid_argument("no frames to accumulate");
    if (times.size() != frames.size())
        throw std::invalid_argument("frame/time count mismatch");
    for (const auto& f : frames)
        if (f.nx != frames[0].nx || f.ny != frames[0].ny)
            throw std::invalid_argument("inconsistent frame shapes");
    DensityImage out = frames[0];
    if (frames.size() > 1) {
        std::fill(out.data.begin(), out.data.end(), 0.0);
        for (size_t k = 0; k + 1 < frames.size(); ++k) {
            double w = 0.5 * (times[k + 1] - times[k]);
            for (size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += w * (frames[k].data[i] + frames[k + 1].data[i]);
        }
    }
    double mx = *std::max_element(out.data.begin(), out.data.end());
    if (mx > 0)
        for (auto& v : out.data) v /= mx;
    return out;
}

namespace {

double covariance_angle(double cxx, double cyy, double cxy) {
    double tr = cxx + cyy;
    double det = cxx * cyy - cxy * cxy;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    double l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
    if (l2 <= 0.0 || l1 / l2 < 1.05)
        throw std::runtime_error("orientation undefined: density nearly isotropic");
    return 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
}

}  // namespace

double orientation_angle(const GridWavefunction& psi2d) {
    if (!psi2d.is_2d()) throw std::invalid_argument("orientation needs a 2D state");
    Moments m = grid_moments(psi2d);
    double x0 = m.mx / m.w, y0 = m.my / m.w;
    return covariance_angle(m.mxx / m.w - x0 * x0, m.myy / m.w - y0 * y0,
                            m.mxy / m.w - x0 * y0);
}

double orientation_angle(const DensityImage& rho) {
    Moments m;
    for (int j = 0; j < rho.ny; ++j)
        for (int i = 0; i < rho.nx; ++i) {
            double r = rho.data[i + static_cast<size_t>(rho.nx) * j];
            double x = rho.origin_x + i * rho.spacing;
            double y = rho.origin_y + j * rho.spacing;
            m.w += r;
            m.mx += r * x;
            m.my += r * y;
            m.mxx += r * x * x;
            m.myy += r * y * y;
            m.mxy += r * x * y;
        }
    double x0 = m.mx / m.w, y0 = m.my / m.w;
    return covariance_angle(m.mxx / m.w - x0 * x0, m.myy / m.w - y0 * y0,
                            m.mxy / m.w - x0 * y0);
}

std::vector<double> unwrap_half_turns(const std::vector<double>& angles) {
    std::vector<double> out(angles);
    for (size_t i = 1; i < out.size(); ++i) {
        while (out[i] - out[i - 1] > M_PI / 2.0) out[i] -= M_PI;
        while (out[i] - out[i - 1] < -M_PI / 2.0) out[i] += M_PI;
    }
    return out;
}

}  // namespace stark
