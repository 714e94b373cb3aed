#pragma once

#include "couplab/path.hpp"
#include "couplab/rng.hpp"
#include "couplab/spectral.hpp"

namespace couplab::dyn {

using Eigen::MatrixXcd;

enum class CglCase { L2Subcritical, H1Subcritical };

/// Block noise operator b(u) = b(P_{N1} u):
///   low block (modes 1..N)   sigma0 * (I + mix * gate(P_{N1}u) * mixer),
///   high block (modes N+1..M) fixed diagonal amplitudes high_amp / mu_k^decay.
/// The mixer is a fixed dense complex matrix of operator norm <= 1, so the low
/// block is invertible with |inverse| <= 1/(sigma0 (1 - mix)).
struct NoiseOperator {
    int M = 0, N = 0, N1 = 0;
    double sigma0 = 0.5;
    double mix = 0.1;
    MatrixXcd mixer;     // N x N
    Eigen::VectorXd high; // M - N amplitudes

    static NoiseOperator make(int M, int N, int N1, double sigma0, double mix, double high_amp,
                              double high_decay);

    /// Bounded Lipschitz scalar gate of the first N1 modes, in [0, 1).
    double gate(const VectorXcd& low) const;
    /// N x N low block evaluated at the low modes.
    MatrixXcd low_block(const VectorXcd& low) const;
    /// Sup over states of |b(u)|^2_{L2(L2, H^s)} (gate at its sup).
    double b_bound_sq(double s) const;
};

/// Spectral Galerkin CGL on D = (0,1) with Dirichlet data:
///   du + (eps + i) A u dt + (eta + lambda i)|u|^{2 sigma} u dt = b(u) dW.
/// Time stepping: exact linear factor, explicit nonlinearity and noise
///   a_k <- exp(-(eps+i) mu_k dt) a_k - NL_k(u) dt + (b(u) dW)_k,
/// which makes the discrete Girsanov exponent exact for drift changes.
struct CglModel {
    double eps = 1.0;
    double eta = 1.0;
    int lambda = 1;
    double sigma_exp = 1.0;
    int M = 64, N = 8, N1 = 4;
    double dt = 1e-3;
    double T = 1.0;
    CglCase case_tag = CglCase::H1Subcritical;
    NoiseOperator noise;
    SineTransform tr;
    VectorXcd lin;        // per-mode linear factor over one step
    int dealias_keep = 0; // NL modes with 1-based index above this are zeroed
    double blowup_threshold = 1e12;

    CglModel() = default;
    CglModel(double eps_, double eta_, int lambda_, double sigma_exp_, int M_, int N_, int N1_,
             double dt_, double T_, CglCase c, NoiseOperator op, int grid = 0);

    int steps() const { return static_cast<int>(std::lround(T / dt)); }
    const Eigen::VectorXd& mu() const { return tr.eigenvalues(); }
};

/// (eta + lambda i) * spectral coefficients of |u|^{2 sigma} u, 2/3-dealiased.
VectorXcd nonlinearity(const CglModel& m, const VectorXcd& u);

/// One step; dW = raw Wiener increments (M complex, re/im iid N(0, dt)).
/// Throws BlowUpError(t_for_error) when a coefficient leaves the finite range.
VectorXcd step_cgl(const CglModel& m, const VectorXcd& u, const VectorXcd& dW,
                   double t_for_error = 0.0);

SpectralPath simulate_cgl(const CglModel& m, const VectorXcd& u0, int n_steps, Rng& rng,
                          double t_offset = 0.0);

/// Integrates the Q_N equation along a given low path and high-noise increments;
/// Y(0) = Q_N u0. Rows of the result are the high modes at each grid time.
MatrixXcd phi_reconstruct_cgl(const CglModel& m, const MatrixXcd& xpath, const MatrixXcd& deta,
                              const VectorXcd& u0, double t_offset = 0.0);

/// Case Lyapunov functional: |u|^2 (L2 case) or 1/2 |grad u|^2 + |u|_{2s+2}^{2s+2}/(2s+2).
double lyapunov(const CglModel& m, const VectorXcd& u);

/// Running energy E_u(t, t0): case terminal functional plus trapezoid-accumulated
/// nonnegative integral components.
struct EnergyLedger {
    double t0 = 0.0;
    double t = 0.0;
    double terminal = 0.0;
    Eigen::Vector3d integrals = Eigen::Vector3d::Zero();
    Eigen::Vector3d prev = Eigen::Vector3d::Zero();
    double value() const { return terminal + integrals.sum(); }
};

EnergyLedger energy_start(const CglModel& m, const VectorXcd& u, double t0);
void energy_update(const CglModel& m, EnergyLedger& led, const VectorXcd& u, double dt);

/// Binding drift rows d(t_i) = 1_{i < tau_steps} sigma_l(Z_i)^{-1}
/// (P_N NL(Z_i + Phi2_i) - P_N NL(Z_i + Phi1_i)); Phi_j reconstructed from
/// (zpath, deta) with the high modes of u0j.
MatrixXcd girsanov_drift_binding_cgl(const CglModel& m, const MatrixXcd& zpath,
                                     const MatrixXcd& deta, const VectorXcd& u01,
                                     const VectorXcd& u02, int tau_steps);

/// Scheme increments dbeta of a low path under the truncated dynamics bound to u0.
MatrixXcd recover_dbeta_cgl(const CglModel& m, const MatrixXcd& zpath, const MatrixXcd& deta,
                            const VectorXcd& u0, int tau_steps);

} // namespace couplab::dyn
