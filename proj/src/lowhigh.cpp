#include "couplab/lowhigh.hpp"

#include "couplab/errors.hpp"

#include <cmath>

namespace couplab::dyn {

LowHighModel::LowHighModel(std::function<double(double, double)> f_,
                           std::function<double(double, double)> g_,
                           std::function<double(double)> sl, std::function<double(double)> sh,
                           double sup_f_, double lip_f_, double sup_g_, double sigma0_, double K0_,
                           double dt_, double T_)
    : f(std::move(f_)), g(std::move(g_)), sigma_l(std::move(sl)), sigma_h(std::move(sh)),
      sup_f(sup_f_), lip_f(lip_f_), sup_g(sup_g_), sigma0(sigma0_), K0(K0_), dt(dt_), T(T_) {
    if (dt <= 0 || T <= 0) throw ConfigError("lowhigh model: dt and T must be positive");
    if (sigma0 <= 0) throw ConfigError("lowhigh model: sigma0 must be positive");
    // spot checks on a grid: sigma_l floor, g contraction in y, dissipativity
    const int n = 17;
    const double span = 4.0;
    for (int i = 0; i < n; ++i) {
        double x = -span + 2 * span * i / (n - 1);
        if (sigma_l(x) < sigma0 - 1e-12)
            throw ConfigError("lowhigh model: sigma_l below sigma0 on check grid");
        for (int j = 0; j < n; ++j) {
            double y1 = -span + 2 * span * j / (n - 1);
            if (std::fabs(f(x, y1)) > sup_f + 1e-9)
                throw ConfigError("lowhigh model: |f| exceeds sup_f on check grid");
            if (std::fabs(g(x, y1)) > sup_g + 1e-9)
                throw ConfigError("lowhigh model: |g| exceeds sup_g on check grid");
            if (f(x, y1) * x + g(x, y1) * y1 < -(x * x + y1 * y1 + K0) - 1e-9)
                throw ConfigError("lowhigh model: dissipativity fails on check grid");
            for (int k = j + 1; k < n; ++k) {
                double y2 = -span + 2 * span * k / (n - 1);
                if (std::fabs(g(x, y1) - g(x, y2)) > std::fabs(y1 - y2) + 1e-9)
                    throw ConfigError("lowhigh model: g contraction in y fails on check grid");
            }
        }
    }
}

Eigen::Vector2d step_lowhigh(const LowHighModel& m, const Eigen::Vector2d& u,
                             const Eigen::Vector2d& dw) {
    double x = u[0], y = u[1];
    return {x - (2.0 * x + m.f(x, y)) * m.dt + m.sigma_l(x) * dw[0],
            y - (2.0 * y + m.g(x, y)) * m.dt + m.sigma_h(x) * dw[1]};
}

PlanarPath simulate_lowhigh(const LowHighModel& m, const Eigen::Vector2d& u0, int n_steps,
                            Rng& rng) {
    PlanarPath p;
    p.grid = {m.dt, n_steps};
    p.states.resize(n_steps + 1, 2);
    p.dw.resize(n_steps, 2);
    p.states.row(0) = u0.transpose();
    double sq = std::sqrt(m.dt);
    for (int i = 0; i < n_steps; ++i) {
        p.dw(i, 0) = sq * rng.gaussian();
        p.dw(i, 1) = sq * rng.gaussian();
        p.states.row(i + 1) =
            step_lowhigh(m, p.states.row(i).transpose(), p.dw.row(i).transpose()).transpose();
    }
    return p;
}

Eigen::VectorXd phi_reconstruct(const LowHighModel& m, const Eigen::VectorXd& xpath,
                                const Eigen::VectorXd& deta, double y0) {
    int n = static_cast<int>(deta.size());
    if (xpath.size() != n + 1)
        throw ContractError("phi_reconstruct: xpath/deta grid mismatch");
    Eigen::VectorXd y(n + 1);
    y[0] = y0;
    for (int i = 0; i < n; ++i) {
        double x = xpath[i];
        y[i + 1] = y[i] - (2.0 * y[i] + m.g(x, y[i])) * m.dt + m.sigma_h(x) * deta[i];
    }
    return y;
}

Eigen::VectorXd girsanov_drift_binding(const LowHighModel& m, const Eigen::VectorXd& zpath,
                                       const Eigen::VectorXd& deta, double y1, double y2) {
    int n = static_cast<int>(deta.size());
    Eigen::VectorXd phi1 = phi_reconstruct(m, zpath, deta, y1);
    Eigen::VectorXd phi2 = phi_reconstruct(m, zpath, deta, y2);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
        double sl = m.sigma_l(zpath[i]);
        if (sl < m.sigma0 - 1e-12)
            throw ContractError("girsanov_drift_binding: sigma_l below sigma0 along path");
        d[i] = (m.f(zpath[i], phi2[i]) - m.f(zpath[i], phi1[i])) / sl;
    }
    return d;
}

Eigen::VectorXd recover_dbeta(const LowHighModel& m, const Eigen::VectorXd& zpath,
                              const Eigen::VectorXd& deta, double y0) {
    int n = static_cast<int>(deta.size());
    Eigen::VectorXd phi = phi_reconstruct(m, zpath, deta, y0);
    Eigen::VectorXd dbeta(n);
    for (int i = 0; i < n; ++i) {
        double z = zpath[i];
        dbeta[i] = (zpath[i + 1] - z + (2.0 * z + m.f(z, phi[i])) * m.dt) / m.sigma_l(z);
    }
    return dbeta;
}

} // namespace couplab::dyn
