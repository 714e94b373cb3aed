#pragma once

#include "couplab/path.hpp"
#include "couplab/rng.hpp"

#include <functional>

namespace couplab::dyn {

/// Planar system mimicking a low/high mode split:
///   dX + 2X dt + f(X,Y) dt = sigma_l(X) dbeta
///   dY + 2Y dt + g(X,Y) dt = sigma_h(X) deta
/// f, g, sigma_l, sigma_h bounded Lipschitz; sigma_l >= sigma0 > 0;
/// |g(x,y1) - g(x,y2)| <= |y1 - y2|; f x + g y >= -(x^2 + y^2 + K0).
struct LowHighModel {
    std::function<double(double, double)> f;
    std::function<double(double, double)> g;
    std::function<double(double)> sigma_l;
    std::function<double(double)> sigma_h;
    double sup_f = 0.0, lip_f = 0.0;
    double sup_g = 0.0;
    double sigma0 = 0.0;
    double K0 = 0.0;
    double dt = 1e-3;
    double T = 1.0;

    LowHighModel() = default;
    LowHighModel(std::function<double(double, double)> f_, std::function<double(double, double)> g_,
                 std::function<double(double)> sl, std::function<double(double)> sh, double sup_f_,
                 double lip_f_, double sup_g_, double sigma0_, double K0_, double dt_, double T_);

    int steps() const { return static_cast<int>(std::lround(T / dt)); }
};

/// Explicit Euler-Maruyama step; dw = (dbeta, deta).
Eigen::Vector2d step_lowhigh(const LowHighModel& m, const Eigen::Vector2d& u,
                             const Eigen::Vector2d& dw);

PlanarPath simulate_lowhigh(const LowHighModel& m, const Eigen::Vector2d& u0, int n_steps,
                            Rng& rng);

/// High-mode reconstruction: integrates the Y equation along a given low path
/// and high-noise increments. Non-anticipative in (X, eta). Throws ContractError
/// on grid mismatch. Returns the Y path (n+1 values).
Eigen::VectorXd phi_reconstruct(const LowHighModel& m, const Eigen::VectorXd& xpath,
                                const Eigen::VectorXd& deta, double y0);

/// Binding drift d(t) = sigma_l(Z)^{-1} (f(Z, Phi(Z,xi,(x,y2))) - f(Z, Phi(Z,xi,(x,y1)))).
/// Throws ContractError if sigma_l drops below sigma0 along the path.
Eigen::VectorXd girsanov_drift_binding(const LowHighModel& m, const Eigen::VectorXd& zpath,
                                       const Eigen::VectorXd& deta, double y1, double y2);

/// Scheme increments dbeta of a low path under the dynamics bound to (zpath[0], y0).
Eigen::VectorXd recover_dbeta(const LowHighModel& m, const Eigen::VectorXd& zpath,
                              const Eigen::VectorXd& deta, double y0);

} // namespace couplab::dyn
