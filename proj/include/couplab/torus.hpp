#pragma once

#include "couplab/path.hpp"
#include "couplab/rng.hpp"

#include <functional>

namespace couplab::dyn {

/// Wraps to the fundamental domain [0, 1).
double wrap01(double x);
/// Geodesic distance on the unit circle.
double torus_dist(double a, double b);
/// Representative of b - a in (-1/2, 1/2].
double torus_signed_diff(double b, double a);

/// dX + f(X) dt = dW on the circle, explicit Euler-Maruyama.
struct TorusModel {
    std::function<double(double)> f; // 1-periodic drift
    double lip_f = 0.0;
    double sup_f = 0.0;
    double dt = 1e-3;
    double T = 1.0;

    TorusModel() = default;
    /// Spot-checks the Lipschitz/sup bounds on a grid; throws ConfigError.
    TorusModel(std::function<double(double)> drift, double lip, double sup, double dt_,
               double T_);

    int steps() const { return static_cast<int>(std::lround(T / dt)); }
};

/// One step: x - f(x) dt + dW, wrapped.
double step_torus(const TorusModel& m, double x, double dW);

/// Wrapped trajectory over one block.
ScalarPath simulate_torus(const TorusModel& m, double x0, Rng& rng);

/// Unwrapped trajectory (real line lift); used by the shifted path coupling.
ScalarPath simulate_torus_unwrapped(const TorusModel& m, double x0, Rng& rng);

/// Drift converting the shifted law D(X(.,x1) + (T-t)/T d) into D(X(.,x2)):
/// d(t) = (x2-x1)/T + f(Xtilde(t) - (T-t)(x2-x1)/T) - f(Xtilde(t)).
/// Asserts |d| <= dist(x1,x2)/T + 2 sup_f pointwise.
Eigen::VectorXd girsanov_drift_torus(const TorusModel& m, double T, double x1, double x2,
                                     const Eigen::VectorXd& shifted_states);

/// Scheme increments of an unwrapped path under the plain dynamics.
Eigen::VectorXd recover_increments_torus(const TorusModel& m, const Eigen::VectorXd& states);

/// Scheme increments under the shifted dynamics started at x1 (target x2).
Eigen::VectorXd recover_increments_torus_shifted(const TorusModel& m, double x1, double x2,
                                                 const Eigen::VectorXd& shifted_states);

} // namespace couplab::dyn
