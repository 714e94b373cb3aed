#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace couplab {

/// Uniform time grid shared by all path containers.
struct TimeGrid {
    double dt = 0.0;
    int n_steps = 0;
    double t(int i) const { return dt * i; }
    double horizon() const { return dt * n_steps; }
};

/// Scalar trajectory with its driving increments (torus model).
struct ScalarPath {
    TimeGrid grid;
    Eigen::VectorXd states; // n_steps + 1
    Eigen::VectorXd dw;     // n_steps
    uint64_t seed = 0;
};

/// Planar trajectory (low/high toy system); rows are time points.
struct PlanarPath {
    TimeGrid grid;
    Eigen::MatrixX2d states; // (n_steps + 1) x 2
    Eigen::MatrixX2d dw;     // n_steps x 2
    uint64_t seed = 0;
};

/// Spectral trajectory (CGL); row i holds the mode amplitudes at t_i.
struct SpectralPath {
    TimeGrid grid;
    Eigen::MatrixXcd states; // (n_steps + 1) x M
    Eigen::MatrixXcd dw;     // n_steps x M
    uint64_t seed = 0;
};

/// Discrete Girsanov exponent: sum_i <d_i, dW_i> - 1/2 sum_i |d_i|^2 dt.
/// Exactly transforms the discrete scheme's path density when the drift enters
/// the step additively through the noise channel.
inline double log_likelihood_ratio(const Eigen::VectorXd& drift, const Eigen::VectorXd& dw,
                                   double dt) {
    return drift.dot(dw) - 0.5 * drift.squaredNorm() * dt;
}

inline double log_likelihood_ratio(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& dw,
                                   double dt) {
    return drift.cwiseProduct(dw).sum() - 0.5 * drift.squaredNorm() * dt;
}

/// Complex channels: real inner product Re<d, dW> over all modes.
inline double log_likelihood_ratio(const Eigen::MatrixXcd& drift, const Eigen::MatrixXcd& dw,
                                   double dt) {
    return drift.conjugate().cwiseProduct(dw).sum().real() - 0.5 * drift.squaredNorm() * dt;
}

} // namespace couplab
