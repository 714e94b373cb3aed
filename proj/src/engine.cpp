#include "couplab/engine.hpp"

#include "couplab/errors.hpp"
#include "couplab/measure.hpp"
#include "couplab/workers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace couplab::engine {

void SchedulerConfig::validate() const {
    if (T <= 0) throw ConfigError("scheduler: T must be positive");
    if (t1 <= 0 || t1 > T) throw ConfigError("scheduler: need 0 < t1 <= T");
    if (d0 < 0) throw ConfigError("scheduler: d0 must be nonnegative");
    if (R0 < d0) throw ConfigError("scheduler: R0 >= d0 required");
    if (max_blocks <= 0) throw ConfigError("scheduler: max_blocks must be positive");
    if (rejection_cap <= 0) throw ConfigError("scheduler: rejection_cap must be positive");
    if (budgets_active) {
        if (aleph <= 0 || B <= 0 || C_N < 0)
            throw ConfigError("scheduler: energy budgets must be positive");
        if (alpha < 1.0) throw ConfigError("scheduler: alpha >= 1 required");
    }
}

int l0_update(int l0_k, int k, const L0Inputs& in, double d0) {
    if (l0_k != kNever && l0_k <= k && in.equal && in.energy_ok) return l0_k;
    if (in.terminal_low_equal && in.H_end_sum <= d0 && in.fresh_ok) return k + 1;
    return kNever;
}

EpisodeResult simulate_pair(const PairKit& kit, const VectorXd& u01, const VectorXd& u02,
                            int horizon_blocks, const SchedulerConfig& cfg, const Rng& rng) {
    cfg.validate();
    if (u01.size() != kit.state_dim() || u02.size() != kit.state_dim())
        throw ContractError("simulate_pair: state dimension mismatch");

    EpisodeResult ep;
    int dim = kit.state_dim();
    ep.u1_ends.resize(horizon_blocks + 1, dim);
    ep.u2_ends.resize(horizon_blocks + 1, dim);

    VectorXd u1 = u01, u2 = u02;
    ep.u1_ends.row(0) = u1.transpose();
    ep.u2_ends.row(0) = u2.transpose();

    double H1 = kit.lyapunov(u1), H2 = kit.lyapunov(u2);
    bool fresh0 = kit.low_equal(u1, u2) && (H1 + H2 <= cfg.d0) && kit.fresh_energy_ok(u1, 0) &&
                  kit.fresh_energy_ok(u2, 1);
    int l0 = fresh0 ? 0 : kNever;
    std::unique_ptr<PairKit::Window> win = l0 == 0 ? kit.fresh_window(u1, u2) : nullptr;
    ep.l0.push_back(l0);

    for (int k = 0; k < horizon_blocks; ++k) {
        Rng brng = rng.derive(stream::block).derive(static_cast<uint64_t>(k));
        BlockOutcome out;
        try {
            out = (l0 != kNever) ? kit.coupled_block(u1, u2, k - l0, *win, brng)
                                 : kit.uncoupled_block(u1, u2, brng);
        } catch (const BlowUpError& e) {
            ep.blown_up = true;
            ep.blowup_time = k * kit.block_T() + e.time;
            ep.u1_ends.conservativeResize(k + 1, dim);
            ep.u2_ends.conservativeResize(k + 1, dim);
            return ep;
        }
        if (out.equal && !kit.low_equal(out.u1_end, out.u2_end))
            throw ContractError("simulate_pair: equality flag set but low modes differ");

        H1 = kit.lyapunov(out.u1_end);
        H2 = kit.lyapunov(out.u2_end);
        L0Inputs in;
        in.equal = out.equal;
        in.energy_ok = out.energy_ok;
        in.terminal_low_equal = out.terminal_low_equal;
        in.H_end_sum = H1 + H2;
        in.fresh_ok = kit.fresh_energy_ok(out.u1_end, 0) && kit.fresh_energy_ok(out.u2_end, 1);
        int l0_new = l0_update(l0, k, in, cfg.d0);
        if (l0_new == kNever) {
            win.reset();
        } else if (l0_new == k + 1 && l0_new != l0) {
            win = kit.fresh_window(out.u1_end, out.u2_end);
        }

        BlockRecord rec;
        rec.k = k;
        rec.l0_after = l0_new;
        rec.H1 = H1;
        rec.H2 = H2;
        rec.equal = out.equal;
        rec.energy_ok = out.energy_ok;
        rec.attempted = out.attempted;
        rec.attempt_success = out.attempt_success;
        rec.dist = kit.dist(out.u1_end, out.u2_end);
        rec.trials = out.trials;
        ep.blocks.push_back(rec);
        ep.l0.push_back(l0_new);

        u1 = out.u1_end;
        u2 = out.u2_end;
        ep.u1_ends.row(k + 1) = u1.transpose();
        ep.u2_ends.row(k + 1) = u2.transpose();
        l0 = l0_new;
    }
    return ep;
}

BlockProbabilities estimate_block_probabilities(const PairKit& kit, const SchedulerConfig& cfg,
                                                const VectorXd& u01, const VectorXd& u02,
                                                int episodes, int horizon_blocks, const Rng& rng,
                                                int workers) {
    struct Counts {
        long p0_n = 0, p0_s = 0;
        long pm1_n = 0, pm1_s = 0;
        std::map<int, std::pair<long, long>> gap; // gap -> (n, successes)
    };
    std::vector<Counts> per(static_cast<size_t>(episodes));

    parallel_for(episodes, workers, [&](int e) {
        Rng er = rng.derive(stream::episode).derive(static_cast<uint64_t>(e));
        EpisodeResult ep = simulate_pair(kit, u01, u02, horizon_blocks, cfg, er);
        Counts& c = per[static_cast<size_t>(e)];
        for (size_t k = 0; k < ep.blocks.size(); ++k) {
            int l0k = ep.l0[k];
            int l0k1 = ep.l0[k + 1];
            if (l0k != kNever) {
                int gap = static_cast<int>(k) - l0k;
                auto& [n, s] = c.gap[gap];
                ++n;
                if (l0k1 == l0k) ++s;
                if (gap == 0) {
                    ++c.p0_n;
                    if (l0k1 == l0k) ++c.p0_s;
                }
            } else {
                double Hk = kit.lyapunov(ep.u1_ends.row(static_cast<int>(k)).transpose()) +
                            kit.lyapunov(ep.u2_ends.row(static_cast<int>(k)).transpose());
                if (Hk <= cfg.R0) {
                    ++c.pm1_n;
                    if (l0k1 == static_cast<int>(k) + 1) ++c.pm1_s;
                }
            }
        }
    });

    Counts total;
    for (const Counts& c : per) {
        total.p0_n += c.p0_n;
        total.p0_s += c.p0_s;
        total.pm1_n += c.pm1_n;
        total.pm1_s += c.pm1_s;
        for (auto& [g, ns] : c.gap) {
            auto& [n, s] = total.gap[g];
            n += ns.first;
            s += ns.second;
        }
    }

    BlockProbabilities out;
    out.episodes = episodes;
    out.enough_samples = episodes >= 100;
    out.p0 =
        total.p0_n > 0 ? stats::wilson(total.p0_s, total.p0_n) : stats::WilsonInterval{0, 0, 1, 0};
    out.p_minus1 = total.pm1_n > 0 ? stats::wilson(total.pm1_s, total.pm1_n)
                                   : stats::WilsonInterval{0, 0, 1, 0};
    for (auto& [g, ns] : total.gap) {
        out.gaps.push_back(g);
        out.p_gap.push_back(stats::wilson(ns.second, ns.first));
    }
    return out;
}

TorusCoupleResult shifted_coupling_block_torus(const dyn::TorusModel& m, double x1, double x2,
                                               Rng& rng, long cap) {
    using namespace dyn;
    int n = m.steps();
    double delta = torus_signed_diff(x2, x1);
    if (delta == 0.0) {
        ScalarPath p = simulate_torus(m, x1, rng);
        return {p.states[n], p.states[n], true, 0};
    }
    double x1w = wrap01(x1);

    auto sample1 = [&](Rng& r) {
        ScalarPath p = simulate_torus_unwrapped(m, x1w, r);
        Eigen::VectorXd v = p.states;
        for (int i = 0; i <= n; ++i) v[i] += (m.T - i * m.dt) / m.T * delta;
        return v;
    };
    auto sample2 = [&](Rng& r) { return simulate_torus_unwrapped(m, x1w + delta, r).states; };
    auto ratio = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd d = girsanov_drift_torus(m, m.T, x1, x2, v);
        Eigen::VectorXd dbeta = recover_increments_torus_shifted(m, x1, x2, v);
        return log_likelihood_ratio(d, dbeta, m.dt);
    };

    auto draw =
        measure::maximal_coupling_sample<Eigen::VectorXd>(sample1, ratio, sample2, rng, cap);
    // the line shift vanishes at t = T, so the terminal point needs no un-shift
    double z1 = wrap01(draw.z1[n]);
    double z2 = draw.coupled ? z1 : wrap01(draw.z2[n]);
    return {z1, z2, draw.coupled, draw.trials};
}

double torus_block_success_oracle(double x1, double x2, double T) {
    double delta = std::fabs(dyn::torus_signed_diff(x2, x1));
    if (delta == 0.0) return 1.0;
    const double pi = 3.14159265358979323846;
    double sd = std::sqrt(T);
    auto f = [&](double z) {
        double a = std::exp(-z * z / (2 * T)) / (sd * std::sqrt(2 * pi));
        double zb = z - delta;
        double b = std::exp(-zb * zb / (2 * T)) / (sd * std::sqrt(2 * pi));
        return std::fabs(a - b);
    };
    double tv = 0.5 * stats::simpson(f, -10 * sd, delta + 10 * sd, 40000);
    return 1.0 - tv;
}

namespace {

double quantile_of(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    size_t i = static_cast<size_t>(q * static_cast<double>(v.size() - 1));
    return v[i];
}

} // namespace

SchedulerConfig calibrate_scheduler(const PairKit& kit, const VectorXd& u01, const VectorXd& u02,
                                    SchedulerConfig base, int nsamples, int horizon_blocks,
                                    const Rng& rng) {
    std::vector<double> H_tail;
    for (int s = 0; s < nsamples; ++s) {
        Rng r = rng.derive(stream::calibrate).derive(static_cast<uint64_t>(s));
        VectorXd u = s % 2 == 0 ? u01 : u02;
        for (int k = 0; k < horizon_blocks; ++k) {
            u = kit.simulate_block_direct(u, r);
            if (k >= horizon_blocks / 2) H_tail.push_back(kit.lyapunov(u));
        }
    }
    base.d0 = std::max(2.0 * quantile_of(H_tail, 0.5), 1e-6);
    double K1_hat = 2.0 * stats::mean(H_tail); // stationary mean ~ K1 / 2
    base.R0 = std::max(base.d0, 5.0 * K1_hat);

    if (base.budgets_active) {
        // growth slope and budget quantiles from energy profiles
        std::vector<double> slopes;
        std::vector<PairKit::EnergyProfile> profs;
        for (int s = 0; s < nsamples; ++s) {
            Rng r = rng.derive(stream::calibrate).derive(0x9000u + static_cast<uint64_t>(s));
            PairKit::EnergyProfile prof = kit.direct_energy_profile(u01, u02, horizon_blocks, r);
            if (prof.t.empty()) continue;
            double tend = prof.t.back();
            if (tend > 0) slopes.push_back((prof.E_own.back() - prof.H0_own) / tend);
            profs.push_back(std::move(prof));
        }
        double B_hat = std::max(1e-3, 1.5 * quantile_of(slopes, 0.9));
        std::vector<double> sup_own, sup_recon;
        for (const auto& p : profs) {
            double so = 0, sr = 0;
            for (size_t i = 0; i < p.t.size(); ++i) {
                so = std::max(so, p.E_own[i] - B_hat * p.t[i]);
                if (!p.E_recon.empty()) sr = std::max(sr, p.E_recon[i] - B_hat * p.t[i]);
            }
            sup_own.push_back(so);
            sup_recon.push_back(sr);
        }
        base.B = B_hat;
        base.aleph = std::max(base.d0, 1.2 * quantile_of(sup_own, 0.9)) + 1.0;
        base.C_N = std::max(0.0, 1.2 * (quantile_of(sup_recon, 0.9) - base.aleph)) + 1.0;
    }
    return base;
}

} // namespace couplab::engine
