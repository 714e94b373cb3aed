#pragma once

#include "couplab/cgl.hpp"
#include "couplab/lowhigh.hpp"
#include "couplab/rng.hpp"
#include "couplab/stats.hpp"
#include "couplab/torus.hpp"

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <vector>

namespace couplab::engine {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// l0 value for "never coupled".
inline constexpr int kNever = std::numeric_limits<int>::max();

struct SchedulerConfig {
    double T = 1.0;     // block length; must equal the model's T
    double d0 = 1.0;    // coupling ball in Lyapunov units
    double R0 = 4.0;    // re-entry radius, >= d0
    double aleph = 20.0;
    double B = 20.0;    // linear energy growth rate
    double C_N = 20.0;  // reconstructed-trajectory allowance
    double alpha = 1.0; // reconstruction growth exponent
    double t1 = 0.5;    // attempt horizon inside an uncoupled block (theta = T - t1)
    int max_blocks = 40;
    long rejection_cap = 1'000'000;
    bool budgets_active = true; // planar toy model runs without energy budgets

    void validate() const;
};

/// What one block construction reports back to the scheduler.
struct BlockOutcome {
    VectorXd u1_end;
    VectorXd u2_end;
    bool equal = false;              // (X, eta) equality over the whole block
    bool terminal_low_equal = false; // low modes equal at block end
    bool energy_ok = true;           // window budgets held through the block
    bool attempted = false;
    bool attempt_success = false;    // image landed on equality, not the cemetery
    long trials = 0;
};

struct BlockRecord {
    int k = 0;
    int l0_after = kNever;
    double H1 = 0.0, H2 = 0.0;
    bool equal = false;
    bool energy_ok = true;
    bool attempted = false;
    bool attempt_success = false;
    double dist = 0.0;
    long trials = 0;
};

struct EpisodeResult {
    std::vector<int> l0;       // l0(k) for k = 0..n_blocks
    std::vector<BlockRecord> blocks;
    MatrixXd u1_ends, u2_ends; // (n_blocks + 1) x state_dim, block-boundary states
    bool blown_up = false;
    double blowup_time = 0.0;

    int first_coupled() const {
        for (size_t k = 0; k < l0.size(); ++k)
            if (l0[k] != kNever) return static_cast<int>(k);
        return -1;
    }
};

/// Per-model block constructions consumed by the generic scheduler.
/// States cross this interface in real coordinates.
class PairKit {
public:
    virtual ~PairKit() = default;

    virtual int state_dim() const = 0;
    virtual double block_T() const = 0;
    virtual double lyapunov(const VectorXd& u) const = 0;
    /// State-space distance used for decay diagnostics (case norm).
    virtual double dist(const VectorXd& a, const VectorXd& b) const = 0;
    virtual bool low_equal(const VectorXd& a, const VectorXd& b) const = 0;
    /// t = 0 energy admission for a fresh coupling window at this state.
    virtual bool fresh_energy_ok(const VectorXd& u, int component) const = 0;

    /// One block of the plain dynamics (marginal-law oracle).
    virtual VectorXd simulate_block_direct(const VectorXd& u, Rng& rng) const = 0;

    /// Carried per-window energy state (opaque to the scheduler).
    struct Window {
        virtual ~Window() = default;
    };
    virtual std::unique_ptr<Window> fresh_window(const VectorXd& u1, const VectorXd& u2) const = 0;

    /// Coupled branch: maximal coupling of the (low path, high noise) laws via
    /// the Girsanov rejection sampler, highs reconstructed, budgets truncated.
    /// `gap` = k - l. Mutates `win` along the realized block when it survives.
    virtual BlockOutcome coupled_block(const VectorXd& u1, const VectorXd& u2, int gap,
                                       Window& win, Rng& rng) const = 0;

    /// Uncoupled branch: trivial coupling for theta = T - t1, then one
    /// equality attempt on the remaining horizon with cemetery semantics.
    virtual BlockOutcome uncoupled_block(const VectorXd& u1, const VectorXd& u2,
                                         Rng& rng) const = 0;

    /// One direct trajectory's running energy plus a partner reconstruction
    /// driven by the same realization (budget calibration). Empty when budgets
    /// do not apply to the model.
    struct EnergyProfile {
        std::vector<double> t;
        std::vector<double> E_own;
        std::vector<double> E_recon;
        double H0_own = 0.0, H0_recon = 0.0;
    };
    virtual EnergyProfile direct_energy_profile(const VectorXd& u_own, const VectorXd& u_other,
                                                int nblocks, Rng& rng) const = 0;
};

/// Inputs that decide l0(k+1) from l0(k).
struct L0Inputs {
    bool equal = false;
    bool energy_ok = false;
    bool terminal_low_equal = false;
    double H_end_sum = 0.0;
    bool fresh_ok = false; // t = 0 energy admission at the would-be new window
};

/// Persistence-consistent update: l0(k+1) in {l0(k), k+1, never}.
int l0_update(int l0_k, int k, const L0Inputs& in, double d0);

/// Alternates coupled/uncoupled block constructions per l0 with fresh
/// independent randomness each block. Bitwise reproducible in (inputs, rng).
EpisodeResult simulate_pair(const PairKit& kit, const VectorXd& u01, const VectorXd& u02,
                            int horizon_blocks, const SchedulerConfig& cfg, const Rng& rng);

/// Conditional block-transition frequencies harvested from episodes.
struct BlockProbabilities {
    stats::WilsonInterval p0{0, 0, 0, 0};       // persistence at gap 0
    stats::WilsonInterval p_minus1{0, 0, 0, 0}; // re-entry success given H_k <= R0
    std::vector<int> gaps;                      // gap values with data
    std::vector<stats::WilsonInterval> p_gap;   // persistence by gap
    long episodes = 0;
    bool enough_samples = true; // false when fewer than 100 episodes
};

BlockProbabilities estimate_block_probabilities(const PairKit& kit, const SchedulerConfig& cfg,
                                                const VectorXd& u01, const VectorXd& u02,
                                                int episodes, int horizon_blocks, const Rng& rng,
                                                int workers = 1);

/// Torus block construction exposed directly: maximal coupling of the
/// line-shifted path law against the target law; returns terminal points and
/// the equality flag.
struct TorusCoupleResult {
    double z1;
    double z2;
    bool coupled;
    long trials;
};
TorusCoupleResult shifted_coupling_block_torus(const dyn::TorusModel& m, double x1, double x2,
                                               Rng& rng, long cap = 1'000'000);

/// 1-D quadrature oracle for the f == 0 torus block: success probability
/// 1 - TV(N(x1, T), N(x1 + delta, T)) reduced to the terminal statistic.
double torus_block_success_oracle(double x1, double x2, double T);

std::unique_ptr<PairKit> make_torus_kit(dyn::TorusModel m, SchedulerConfig cfg);
std::unique_ptr<PairKit> make_lowhigh_kit(dyn::LowHighModel m, SchedulerConfig cfg);
std::unique_ptr<PairKit> make_cgl_kit(dyn::CglModel m, SchedulerConfig cfg);

/// Measures d0, R0 and (when budgets apply) B, aleph, C_N from direct runs:
/// stationary Lyapunov medians and energy-growth quantiles sized so that the
/// budget-violation rate on calibration data stays near 0.1.
SchedulerConfig calibrate_scheduler(const PairKit& kit, const VectorXd& u01, const VectorXd& u02,
                                    SchedulerConfig base, int nsamples, int horizon_blocks,
                                    const Rng& rng);

} // namespace couplab::engine
