#pragma once

#include <Eigen/Dense>

namespace couplab::dyn {

using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Dirichlet sine basis on D = (0,1): e_k(x) = sqrt(2) sin(k pi x), k = 1..M,
/// eigenvalues mu_k = (k pi)^2. Collocation on interior points x_j = j/(G+1),
/// where the discrete analysis is the exact inverse of synthesis for the first
/// G modes, and sums over the grid weighted by 1/(G+1) quadrate integrals.
class SineTransform {
public:
    SineTransform() = default;
    SineTransform(int modes, int grid);

    int modes() const { return modes_; }
    int grid() const { return grid_; }
    double quad_weight() const { return 1.0 / (grid_ + 1); }

    /// Field values at the collocation points.
    VectorXcd to_values(const VectorXcd& coeffs) const { return synth_ * coeffs; }
    /// Derivative values at the collocation points.
    VectorXcd deriv_values(const VectorXcd& coeffs) const { return dsynth_ * coeffs; }
    /// Mode amplitudes from collocation values (exact inverse of to_values).
    VectorXcd to_coeffs(const VectorXcd& values) const {
        return synth_.transpose() * values * quad_weight();
    }

    const VectorXd& eigenvalues() const { return mu_; }

private:
    int modes_ = 0;
    int grid_ = 0;
    MatrixXd synth_;  // grid x modes
    MatrixXd dsynth_; // grid x modes
    VectorXd mu_;
};

/// Spectral Sobolev norm sqrt(sum mu_k^s |a_k|^2); s in [0, 3].
double sobolev_norm(const VectorXcd& coeffs, double s);

/// L^p(D)^p of the field with given collocation values: (1/(G+1)) sum |u_j|^p.
double lp_norm_pow(const VectorXcd& values, double p, double quad_weight);

} // namespace couplab::dyn
