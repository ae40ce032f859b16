#include "stark/ws_basis.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace stark {

namespace {

// Number of eigenvalues of the (diag, off) tridiagonal matrix below lambda,
// by Sturm sequence count.
int sturm_count(const std::vector<double>& diag, double off, double lambda) {
    int count = 0;
    double q = 1.0;
    const double tiny = 1e-300;
    for (size_t i = 0; i < diag.size(); ++i) {
        q = diag[i] - lambda - (i == 0 ? 0.0 : off * off / q);
        if (std::abs(q) < tiny) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

struct EigenSubset {
    std::vector<double> values;
    std::vector<double> vectors;  // column-major N x m, L2-normalized (sum v^2 = 1)
    int n = 0, m = 0;
};

EigenSubset solve_subset(const std::vector<double>& diag, double off, int iu) {
    EigenSubset out;
    out.n = static_cast<int>(diag.size());
    iu = std::min(iu, out.n);
    std::vector<double> d(diag), e(out.n - 1, off);
    out.values.resize(iu);
    out.vectors.resize(static_cast<size_t>(out.n) * iu);
    std::vector<lapack_int> isuppz(2 * std::max(1, iu));
    lapack_int m = 0;
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', out.n, d.data(),
                                     e.data(), 0.0, 0.0, 1, iu, 0.0, &m,
                                     out.values.data(), out.vectors.data(), out.n,
                                     isuppz.data());
    if (info != 0) throw std::runtime_error("tridiagonal eigensolver failed (dstevr)");
    out.m = m;
    out.values.resize(m);
    return out;
}

}  // namespace

void fd_hamiltonian(const LatticeParams& params, const GridSpec& grid, Axis axis,
                    std::vector<double>& diag, double& off) {
    const int n = grid.samples();
    const double h = grid.spacing();
    const double kin = 1.0 / (kEffectiveMass * h * h);  // (1/2m*) * 2/h^2
    diag.resize(n);
    for (int i = 0; i < n; ++i)
        diag[i] = kin + potential_static(params, axis, grid.x_of(i));
    off = -kin / 2.0;
}

double WannierStarkBasis::moment(int p) const {
    int q = std::abs(p);
    if (q >= static_cast<int>(moments.size()))
        throw std::out_of_range("moment order beyond the computed table");
    return moments[q];
}

int WannierStarkBasis::interior_margin() const {
    return std::max(4, grid.wells_count / 4);
}

std::vector<double> WannierStarkBasis::translated_phi(int n) const {
    std::vector<double> out(phi0.size(), 0.0);
    const long s = static_cast<long>(n) * grid.points_per_period;
    const long len = static_cast<long>(phi0.size());
    for (long i = std::max(0L, s); i < std::min(len, len + s); ++i)
        out[i] = phi0[i - s];
    return out;
}

double WannierStarkBasis::dot_translated(int n, const double* f, int len) const {
    const long s = static_cast<long>(n) * grid.points_per_period;
    const long L = std::min(static_cast<long>(phi0.size()), static_cast<long>(len));
    double acc = 0.0;
    for (long i = std::max(0L, s); i < std::min(L, L + s); ++i)
        acc += phi0[i - s] * f[i];
    return acc * grid.spacing();
}

std::vector<LadderState> ladder_classification(const std::vector<double>& energies,
                                               const std::vector<double>& vectors,
                                               const LatticeParams& params,
                                               const GridSpec& grid, Axis axis) {
    (void)params;
    const int n = grid.samples();
    const int m = static_cast<int>(energies.size());
    const int ppp = grid.points_per_period;
    std::vector<LadderState> states(m);
    for (int j = 0; j < m; ++j) {
        // eigenvectors normalized as sum v^2 = 1, so well probabilities and
        // the centroid need no grid-measure factor
        const double* v = &vectors[static_cast<size_t>(j) * n];
        double cen = 0.0, ipr = 0.0;
        for (int w = 0; w < grid.wells_count; ++w) {
            double wp = 0.0;
            for (int i = w * ppp; i < (w + 1) * ppp && i < n; ++i) {
                double rho = v[i] * v[i];
                wp += rho;
                cen += rho * grid.x_of(i);
            }
            ipr += wp * wp;
        }
        LadderState& s = states[j];
        s.energy = energies[j];
        s.centroid = cen;
        s.participation = 1.0 / std::max(ipr, 1e-300);
        s.localized = s.participation <= 3.0;
        s.well = static_cast<int>(std::lround(s.centroid - 0.5));
        const int margin = std::max(4, grid.wells_count / 4);
        s.boundary = s.well < grid.n_lowest() + margin || s.well > grid.n_highest() - margin;
    }
    // ladder index: rank of energy within each well among localized states
    std::map<int, std::vector<int>> by_well;
    for (int j = 0; j < m; ++j)
        if (states[j].localized) by_well[states[j].well].push_back(j);
    for (auto& [well, idx] : by_well) {
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return states[a].energy < states[b].energy; });
        for (size_t r = 0; r < idx.size(); ++r)
            states[idx[r]].ladder_index = static_cast<int>(r);
    }
    return states;
}

WannierStarkBasis solve_ws_basis(const LatticeParams& params, const GridSpec& grid,
                                 Axis axis, int p_max) {
    grid.validate();
    params.validate(axis);
    if (p_max < 1) throw std::invalid_argument("p_max must be >= 1");

    WannierStarkBasis basis;
    basis.params = params;
    basis.grid = grid;
    basis.axis = axis;
    basis.bloch_freq = bloch_frequency(params, axis);

    const int n = grid.samples();
    const double h = grid.spacing();
    const int ppp = grid.points_per_period;
    const double omega_b = basis.bloch_freq;
    const int margin = basis.interior_margin();
    const int n_lo = grid.n_lowest() + margin;
    const int n_hi = grid.n_highest() - margin;
    if (n_lo > 0 || n_hi < 0)
        throw std::invalid_argument("origin well is not interior to the box");

    std::vector<double> diag;
    double off;
    fd_hamiltonian(params, grid, axis, diag, off);

    // Eigenpairs up to the top of the interior ladder window.  E_0 is bounded
    // below by min(V cos + F x) over the box, so an energy cap of
    // V + F*(n_hi + 1) + omega_B safely covers ladder well n_hi.
    const double e_cap =
        params.depth(axis) + params.force(axis) * (n_hi + 1.0) + omega_b;
    int iu = sturm_count(diag, off, e_cap) + 1;
    iu = std::min(std::max(iu, 8), n);
    EigenSubset eig = solve_subset(diag, off, iu);

    basis.classification =
        ladder_classification(eig.values, eig.vectors, params, grid, axis);

    // lowest-ladder representative per well
    std::map<int, int> lowest;      // well -> eigen index
    std::map<int, double> second;   // well -> second-lowest localized energy
    for (int j = 0; j < eig.m; ++j) {
        const LadderState& s = basis.classification[j];
        if (!s.localized || s.boundary) continue;
        if (s.ladder_index == 0) lowest[s.well] = j;
        if (s.ladder_index == 1 && !second.count(s.well)) second[s.well] = s.energy;
    }
    for (int w = n_lo; w <= n_hi; ++w)
        if (!lowest.count(w))
            throw std::runtime_error("ladder identification failed: no localized "
                                     "lowest-ladder state in well " + std::to_string(w));

    // entanglement guard: a second localized state within half a Bloch
    // spacing of the lowest makes the selection ambiguous
    for (auto& [w, e2] : second)
        if (lowest.count(w) &&
            e2 - eig.values[lowest[w]] < 0.5 * omega_b)
            throw std::runtime_error("multiple ladders entangled, refine grid");

    const int j0 = lowest.at(0);
    basis.energy0 = eig.values[j0];

    // uniform-spacing check across the interior ladder
    std::vector<double> gaps;
    for (int w = n_lo; w < n_hi; ++w)
        gaps.push_back(eig.values[lowest.at(w + 1)] - eig.values[lowest.at(w)]);
    double gmean = 0.0;
    for (double g : gaps) gmean += g;
    gmean /= gaps.size();
    double gvar = 0.0;
    for (double g : gaps) {
        if (std::abs(g - omega_b) > 1e-4 * omega_b)
            throw std::runtime_error("ladder identification failed: spacing " +
                                     std::to_string(g) + " != omega_B");
        gvar += (g - gmean) * (g - gmean);
    }
    basis.spacing_stddev = std::sqrt(gvar / gaps.size());

    // phi_0: L2-normalize against the grid measure and fix the sign at the
    // center of well 0
    basis.phi0.assign(n, 0.0);
    const double* v0 = &eig.vectors[static_cast<size_t>(j0) * n];
    const double inv_sqrt_h = 1.0 / std::sqrt(h);
    for (int i = 0; i < n; ++i) basis.phi0[i] = v0[i] * inv_sqrt_h;
    const int i_center = (grid.origin_well * ppp) + ppp / 2;  // x = 1/2
    if (basis.phi0[i_center] < 0.0)
        for (double& v : basis.phi0) v = -v;

    // shift energies so E_0 = 0
    for (auto& s : basis.classification) s.energy -= basis.energy0;
    basis.ladder_wells.clear();
    basis.ladder_energies.clear();
    for (int w = n_lo; w <= n_hi; ++w) {
        basis.ladder_wells.push_back(w);
        basis.ladder_energies.push_back(eig.values[lowest.at(w)] - basis.energy0);
    }

    // translation covariance: compare a few interior ladder states against
    // the translated reference (worst residual kept as a diagnostic)
    basis.covariance_residual = 0.0;
    for (int w : {n_lo, n_lo / 2, 1, 2, n_hi / 2, n_hi}) {
        if (w == 0 || !lowest.count(w)) continue;
        const double* vw = &eig.vectors[static_cast<size_t>(lowest.at(w)) * n];
        std::vector<double> t = basis.translated_phi(w);
        // eigenvector sign is arbitrary; align on the well center
        const int ic = ((w + grid.origin_well) * ppp) + ppp / 2;
        const double sgn = (vw[ic] * inv_sqrt_h) * t[ic] < 0.0 ? -1.0 : 1.0;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = sgn * vw[i] * inv_sqrt_h - t[i];
            r2 += d * d;
        }
        basis.covariance_residual = std::max(basis.covariance_residual, std::sqrt(r2 * h));
    }

    // eigen-residual of the FD operator on phi_0
    {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double hv = diag[i] * basis.phi0[i];
            if (i > 0) hv += off * basis.phi0[i - 1];
            if (i + 1 < n) hv += off * basis.phi0[i + 1];
            double d = hv - basis.energy0 * basis.phi0[i];
            r2 += d * d;
        }
        basis.eigen_residual = std::sqrt(r2 * h);
    }

    // diagnostics: intra-well centroid offset and first-excited-ladder offset
    {
        double xc = 0.0;
        for (int i = 0; i < n; ++i)
            xc += basis.phi0[i] * basis.phi0[i] * grid.x_of(i);
        basis.intra_well_offset = xc * h - 0.5;
    }
    basis.first_excited_offset = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < eig.m; ++j) {
        const LadderState& s = basis.classification[j];
        if (s.well == 0 && j != j0 && s.centroid > -0.25 + 0.5 && s.centroid < 0.25 + 0.5) {
            double offt = s.energy;  // already shifted; E - E_0
            if (offt > 1e-9 && (std::isnan(basis.first_excited_offset) ||
                                offt < basis.first_excited_offset))
                basis.first_excited_offset = offt;
        }
    }

    basis.moments = coupling_moments(basis, p_max);
    return basis;
}

std::vector<double> coupling_moments(const WannierStarkBasis& basis, int p_max) {
    if (p_max < 1) throw std::invalid_argument("p_max must be >= 1");
    const GridSpec& g = basis.grid;
    const int edge = std::min(g.origin_well, g.wells_count - 1 - g.origin_well);
    if (p_max > edge - basis.interior_margin() / 2)
        throw std::invalid_argument("p_max beyond the interior-well margin");
    const int n = g.samples();
    const double h = g.spacing();
    std::vector<double> table(p_max + 1, 0.0);
    for (int p = 0; p <= p_max; ++p) {
        std::vector<double> shifted = basis.translated_phi(p);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += basis.phi0[i] * std::cos(2.0 * M_PI * g.x_of(i)) * shifted[i];
        table[p] = acc * h;
    }
    return table;
}

}  // namespace stark
