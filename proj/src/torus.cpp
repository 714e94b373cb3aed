#include "couplab/torus.hpp"

#include "couplab/errors.hpp"

#include <cmath>

namespace couplab::dyn {

double wrap01(double x) {
    double w = x - std::floor(x);
    return w >= 1.0 ? 0.0 : w; // floor rounding can land exactly on 1.0
}

double torus_dist(double a, double b) {
    double d = std::fabs(wrap01(a) - wrap01(b));
    return std::min(d, 1.0 - d);
}

double torus_signed_diff(double b, double a) {
    double d = wrap01(b) - wrap01(a);
    if (d > 0.5) d -= 1.0;
    if (d <= -0.5) d += 1.0;
    return d;
}

TorusModel::TorusModel(std::function<double(double)> drift, double lip, double sup, double dt_,
                       double T_)
    : f(std::move(drift)), lip_f(lip), sup_f(sup), dt(dt_), T(T_) {
    if (dt <= 0 || T <= 0) throw ConfigError("torus model: dt and T must be positive");
    const int n = 64;
    for (int i = 0; i < n; ++i) {
        double x = (i + 0.5) / n;
        if (std::fabs(f(x)) > sup_f + 1e-9)
            throw ConfigError("torus model: |f| exceeds sup_f on check grid");
        for (int j = i + 1; j < n; ++j) {
            double y = (j + 0.5) / n;
            if (std::fabs(f(x) - f(y)) > lip_f * torus_dist(x, y) + 1e-9)
                throw ConfigError("torus model: f violates lip_f on check grid");
        }
    }
}

double step_torus(const TorusModel& m, double x, double dW) {
    return wrap01(x - m.f(wrap01(x)) * m.dt + dW);
}

ScalarPath simulate_torus(const TorusModel& m, double x0, Rng& rng) {
    int n = m.steps();
    ScalarPath p;
    p.grid = {m.dt, n};
    p.states.resize(n + 1);
    p.dw.resize(n);
    double sq = std::sqrt(m.dt);
    p.states[0] = wrap01(x0);
    for (int i = 0; i < n; ++i) {
        p.dw[i] = sq * rng.gaussian();
        p.states[i + 1] = step_torus(m, p.states[i], p.dw[i]);
    }
    return p;
}

ScalarPath simulate_torus_unwrapped(const TorusModel& m, double x0, Rng& rng) {
    int n = m.steps();
    ScalarPath p;
    p.grid = {m.dt, n};
    p.states.resize(n + 1);
    p.dw.resize(n);
    double sq = std::sqrt(m.dt);
    p.states[0] = x0;
    for (int i = 0; i < n; ++i) {
        p.dw[i] = sq * rng.gaussian();
        p.states[i + 1] = p.states[i] - m.f(wrap01(p.states[i])) * m.dt + p.dw[i];
    }
    return p;
}

Eigen::VectorXd girsanov_drift_torus(const TorusModel& m, double T, double x1, double x2,
                                     const Eigen::VectorXd& shifted_states) {
    int n = static_cast<int>(shifted_states.size()) - 1;
    double delta = torus_signed_diff(x2, x1);
    Eigen::VectorXd d(n);
    double bound = torus_dist(x1, x2) / T + 2.0 * m.sup_f + 1e-9;
    for (int i = 0; i < n; ++i) {
        double t = i * m.dt;
        double s = (T - t) / T;
        double xt = shifted_states[i];
        d[i] = delta / T + m.f(wrap01(xt - s * delta)) - m.f(wrap01(xt));
        if (std::fabs(d[i]) > bound)
            throw ContractError("girsanov_drift_torus: bound |d| <= dist/T + 2 sup_f violated");
    }
    return d;
}

Eigen::VectorXd recover_increments_torus(const TorusModel& m, const Eigen::VectorXd& states) {
    int n = static_cast<int>(states.size()) - 1;
    Eigen::VectorXd dw(n);
    for (int i = 0; i < n; ++i)
        dw[i] = states[i + 1] - states[i] + m.f(wrap01(states[i])) * m.dt;
    return dw;
}

Eigen::VectorXd recover_increments_torus_shifted(const TorusModel& m, double x1, double x2,
                                                 const Eigen::VectorXd& shifted_states) {
    int n = static_cast<int>(shifted_states.size()) - 1;
    double delta = torus_signed_diff(x2, x1);
    Eigen::VectorXd dw(n);
    for (int i = 0; i < n; ++i) {
        double t = i * m.dt;
        double s = (m.T - t) / m.T;
        double x_unshifted = shifted_states[i] - s * delta;
        dw[i] = shifted_states[i + 1] - shifted_states[i] +
                (m.f(wrap01(x_unshifted)) + delta / m.T) * m.dt;
    }
    return dw;
}

} // namespace couplab::dyn
