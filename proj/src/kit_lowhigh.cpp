#include "couplab/engine.hpp"
#include "couplab/errors.hpp"
#include "couplab/gauss.hpp"
#include "couplab/measure.hpp"

#include <cmath>

namespace couplab::engine {
namespace {

using dyn::LowHighModel;
using Eigen::Vector2d;
using Eigen::VectorXd;

// Bounded drifts: no energy budgets or truncation times. The coupled branch
// couples the conditional low-path laws given a shared high-noise path via the
// Girsanov rejection sampler; the uncoupled branch runs the homotopy-shifted
// attempt targeting exact terminal low-mode equality.
class LowHighKit final : public PairKit {
public:
    LowHighKit(LowHighModel m, SchedulerConfig cfg) : m_(std::move(m)), cfg_(cfg) {}

    int state_dim() const override { return 2; }
    double block_T() const override { return m_.T; }
    double lyapunov(const VectorXd& u) const override { return u.squaredNorm(); }
    double dist(const VectorXd& a, const VectorXd& b) const override { return (a - b).norm(); }
    bool low_equal(const VectorXd& a, const VectorXd& b) const override { return a[0] == b[0]; }
    bool fresh_energy_ok(const VectorXd&, int) const override { return true; }

    VectorXd simulate_block_direct(const VectorXd& u, Rng& rng) const override {
        dyn::PlanarPath p = dyn::simulate_lowhigh(m_, u, m_.steps(), rng);
        return p.states.row(m_.steps()).transpose();
    }

    struct NoWindow final : Window {};
    std::unique_ptr<Window> fresh_window(const VectorXd&, const VectorXd&) const override {
        return std::make_unique<NoWindow>();
    }

    BlockOutcome coupled_block(const VectorXd& u1, const VectorXd& u2, int, Window&,
                               Rng& rng) const override {
        if (u1[0] != u2[0]) throw ContractError("lowhigh coupled_block: low modes differ");
        const int n = m_.steps();
        const double sq = std::sqrt(m_.dt);
        const double x = u1[0], y1 = u1[1], y2 = u2[1];

        Rng noise_rng = rng.derive(0xA1);
        VectorXd deta(n);
        for (int i = 0; i < n; ++i) deta[i] = sq * noise_rng.gaussian();

        auto integrate = [&](double y0, Rng& r) {
            VectorXd z(n + 1);
            z[0] = x;
            double phi = y0;
            for (int i = 0; i < n; ++i) {
                double dbeta = sq * r.gaussian();
                double zi = z[i];
                z[i + 1] = zi - (2.0 * zi + m_.f(zi, phi)) * m_.dt + m_.sigma_l(zi) * dbeta;
                phi = phi - (2.0 * phi + m_.g(zi, phi)) * m_.dt + m_.sigma_h(zi) * deta[i];
            }
            return z;
        };
        auto sample1 = [&](Rng& r) { return integrate(y1, r); };
        auto sample2 = [&](Rng& r) { return integrate(y2, r); };
        auto log_ratio = [&](const VectorXd& z) {
            VectorXd d = dyn::girsanov_drift_binding(m_, z, deta, y1, y2);
            VectorXd dbeta1 = dyn::recover_dbeta(m_, z, deta, y1);
            return log_likelihood_ratio(VectorXd(-d), dbeta1, m_.dt);
        };

        Rng trial_rng = rng.derive(0xA2);
        auto draw = measure::maximal_coupling_sample<VectorXd>(sample1, log_ratio, sample2,
                                                               trial_rng, cfg_.rejection_cap);

        VectorXd phi1 = dyn::phi_reconstruct(m_, draw.z1, deta, y1);
        VectorXd phi2 = dyn::phi_reconstruct(m_, draw.z2, deta, y2);
        BlockOutcome out;
        out.u1_end = Vector2d(draw.z1[n], phi1[n]);
        out.u2_end = Vector2d(draw.z2[n], phi2[n]);
        out.equal = draw.coupled;
        out.terminal_low_equal = draw.z1[n] == draw.z2[n];
        out.energy_ok = true;
        out.trials = draw.trials;
        return out;
    }

    BlockOutcome uncoupled_block(const VectorXd& u1in, const VectorXd& u2in,
                                 Rng& rng) const override {
        const double sq = std::sqrt(m_.dt);
        const int n_total = m_.steps();
        int n1 = std::clamp(static_cast<int>(std::lround(cfg_.t1 / m_.dt)), 1, n_total);
        const int n_theta = n_total - n1;
        const bool started_equal = u1in[0] == u2in[0] && u1in[1] == u2in[1];

        Vector2d u1 = u1in, u2 = u2in;
        Rng theta_rng = rng.derive(0xB1);
        for (int i = 0; i < n_theta; ++i) {
            Vector2d dw(sq * theta_rng.gaussian(), sq * theta_rng.gaussian());
            u1 = dyn::step_lowhigh(m_, u1, dw);
            u2 = dyn::step_lowhigh(m_, u2, dw);
        }

        const double x1 = u1[0], y1 = u1[1], x2 = u2[0], y2 = u2[1];
        const double delta0 = x2 - x1;
        Rng noise_rng = rng.derive(0xB2);
        VectorXd deta(n1);
        for (int i = 0; i < n1; ++i) deta[i] = sq * noise_rng.gaussian();
        auto shift = [&](int i) { return delta0 * static_cast<double>(n1 - i) / n1; };

        auto integrate = [&](double x0, double y0, Rng& r) {
            VectorXd z(n1 + 1);
            z[0] = x0;
            double phi = y0;
            for (int i = 0; i < n1; ++i) {
                double dbeta = sq * r.gaussian();
                double zi = z[i];
                z[i + 1] = zi - (2.0 * zi + m_.f(zi, phi)) * m_.dt + m_.sigma_l(zi) * dbeta;
                phi = phi - (2.0 * phi + m_.g(zi, phi)) * m_.dt + m_.sigma_h(zi) * deta[i];
            }
            return z;
        };
        auto sample1 = [&](Rng& r) {
            VectorXd z = integrate(x1, y1, r);
            for (int i = 0; i <= n1; ++i) z[i] += shift(i);
            return z;
        };
        auto sample2 = [&](Rng& r) { return integrate(x2, y2, r); };
        // kernel ratio of the target law against the shifted law at an object path
        auto log_ratio = [&](const VectorXd& v) {
            double lr = 0.0;
            double phi1 = y1, phi2 = y2;
            for (int i = 0; i < n1; ++i) {
                double xa = v[i] - shift(i);
                double mean1 =
                    xa - (2.0 * xa + m_.f(xa, phi1)) * m_.dt + shift(i + 1);
                double sd1 = m_.sigma_l(xa) * sq;
                double xb = v[i];
                double mean2 = xb - (2.0 * xb + m_.f(xb, phi2)) * m_.dt;
                double sd2 = m_.sigma_l(xb) * sq;
                lr += gauss_log_ratio_scalar(v[i + 1], mean1, sd1, mean2, sd2);
                phi1 = phi1 - (2.0 * phi1 + m_.g(xa, phi1)) * m_.dt + m_.sigma_h(xa) * deta[i];
                phi2 = phi2 - (2.0 * phi2 + m_.g(xb, phi2)) * m_.dt + m_.sigma_h(xb) * deta[i];
            }
            return lr;
        };

        Rng trial_rng = rng.derive(0xB3);
        auto draw = measure::maximal_coupling_sample<VectorXd>(sample1, log_ratio, sample2,
                                                               trial_rng, cfg_.rejection_cap);

        VectorXd z1(n1 + 1);
        for (int i = 0; i <= n1; ++i) z1[i] = draw.z1[i] - shift(i);
        const VectorXd& z2 = draw.z2;
        VectorXd phi1 = dyn::phi_reconstruct(m_, z1, deta, y1);
        VectorXd phi2 = dyn::phi_reconstruct(m_, z2, deta, y2);

        BlockOutcome out;
        out.u1_end = Vector2d(z1[n1], phi1[n1]);
        out.u2_end = Vector2d(z2[n1], phi2[n1]);
        out.terminal_low_equal = z1[n1] == z2[n1];
        out.equal = started_equal && draw.coupled;
        out.energy_ok = true;
        out.attempted = true;
        out.attempt_success = draw.coupled && out.terminal_low_equal;
        out.trials = draw.trials;
        return out;
    }

    EnergyProfile direct_energy_profile(const VectorXd&, const VectorXd&, int,
                                        Rng&) const override {
        return {};
    }

private:
    LowHighModel m_;
    SchedulerConfig cfg_;
};

} // namespace

std::unique_ptr<PairKit> make_lowhigh_kit(dyn::LowHighModel m, SchedulerConfig cfg) {
    cfg.budgets_active = false;
    return std::make_unique<LowHighKit>(std::move(m), cfg);
}

} // namespace couplab::engine
