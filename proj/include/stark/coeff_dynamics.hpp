#ifndef STARK_COEFF_DYNAMICS_HPP
#define STARK_COEFF_DYNAMICS_HPP

// Dynamics of the Wannier-Stark expansion coefficients c_n(t).  Three routes
// that must agree with each other:
//
//   evolve_full     full coupled system  c_n' = -i A(t) sum_{p!=0} M_p c_{n+p} e^{-i p w_B t}
//   evolve_rwa      nearest-neighbor reduction  c_n' = (M_1 a/2)(c_{n-1} e^{-i b} - c_{n+1} e^{i b})
//   bessel_solution closed form  c_n(t) = sum_p c_{n+p}(0) e^{i p b} J_p(-M_1 \int a)
//
// Both integrators are plain fixed-step RK4 with no renormalization; norm
// drift is kept as a diagnostic of integration quality.

#include <complex>
#include <vector>

#include "stark/drive.hpp"
#include "stark/ws_basis.hpp"

namespace stark {

struct CoefficientState {
    std::vector<std::complex<double>> amps;  // c_n for n in [n_min, n_min+size)
    int n_min = 0;
    double time = 0.0;
    double phase_accum = 0.0;  // \int_0^t A(t') dt' (kept for synthesis phases)

    int n_max() const { return n_min + static_cast<int>(amps.size()) - 1; }
    std::complex<double> amp(int n) const;
    double norm() const;                      // sum |c_n|^2
    void normalize();
    // pads the window so edge amplitudes stay below `threshold`
    void ensure_margin(double threshold = 1e-8, int growth = 8);
    void trim(double threshold = 1e-14);      // drop negligible tails
};

// c_n ~ exp(-(n-center)^2 / width^2), normalized.  Paper defaults: width 3,
// center 0 (exp(-n^2/9)).
CoefficientState init_gaussian(double width, int center = 0);

// sigma = sum_p c_p^* c_{p+1}
Coherence coherence(const CoefficientState& s);

// sum_n n |c_n|^2  (well-index centroid)
double mean_position_coeffs(const CoefficientState& s);

// well-index variance about the centroid
double position_variance_coeffs(const CoefficientState& s);

// v = M_1 alpha Re(sigma e^{-i beta})
double drift_velocity(const WannierStarkBasis& basis, double alpha, double beta,
                      const Coherence& sigma);

// relative diffusion strength M_1 alpha Im(sigma e^{-i beta}); the paper
// fixes no proportionality constant, so only ratios and signs are meaningful
double diffusion_metric(const WannierStarkBasis& basis, double alpha, double beta,
                        const Coherence& sigma);

// RK4 integration of the full coupled system, couplings up to basis.p_max().
// Requires dt <= T_B/200.  Throws on per-step norm drift above 1e-8.
void evolve_full(CoefficientState& state, const WannierStarkBasis& basis,
                 const DriveWaveform& drive, double t_end, double dt);

// RK4 integration of the RWA flow under envelope alpha(t), phase beta.
void evolve_rwa(CoefficientState& state, const WannierStarkBasis& basis,
                const Envelope& alpha, double beta, double t_end, double dt);

// Bessel closed form evaluated at time t from the state at its own time
// (normally 0); orders are truncated once |J_p| < 1e-14.
CoefficientState bessel_solution(const CoefficientState& initial,
                                 const WannierStarkBasis& basis,
                                 const Envelope& alpha, double beta, double t);

// J_0..J_pmax at real z by downward (Miller) recurrence.
std::vector<double> bessel_j_table(double z, int pmax);

}  // namespace stark

#endif
