#include "couplab/engine.hpp"
#include "couplab/errors.hpp"

namespace couplab::engine {
namespace {

// Compact phase space: no Lyapunov structure or energy budgets needed. The
// coupled branch is the trivial shared-noise coupling; the uncoupled branch is
// one shifted-path maximal-coupling attempt per block.
class TorusKit final : public PairKit {
public:
    TorusKit(dyn::TorusModel m, SchedulerConfig cfg) : m_(std::move(m)), cfg_(cfg) {}

    int state_dim() const override { return 1; }
    double block_T() const override { return m_.T; }
    double lyapunov(const VectorXd&) const override { return 0.0; }
    double dist(const VectorXd& a, const VectorXd& b) const override {
        return dyn::torus_dist(a[0], b[0]);
    }
    bool low_equal(const VectorXd& a, const VectorXd& b) const override { return a[0] == b[0]; }
    bool fresh_energy_ok(const VectorXd&, int) const override { return true; }

    VectorXd simulate_block_direct(const VectorXd& u, Rng& rng) const override {
        dyn::ScalarPath p = dyn::simulate_torus(m_, u[0], rng);
        return VectorXd::Constant(1, p.states[m_.steps()]);
    }

    struct NoWindow final : Window {};
    std::unique_ptr<Window> fresh_window(const VectorXd&, const VectorXd&) const override {
        return std::make_unique<NoWindow>();
    }

    BlockOutcome coupled_block(const VectorXd& u1, const VectorXd& u2, int, Window&,
                               Rng& rng) const override {
        if (u1[0] != u2[0]) throw ContractError("torus coupled_block: states differ");
        dyn::ScalarPath p = dyn::simulate_torus(m_, u1[0], rng);
        BlockOutcome out;
        out.u1_end = VectorXd::Constant(1, p.states[m_.steps()]);
        out.u2_end = out.u1_end;
        out.equal = true;
        out.terminal_low_equal = true;
        out.energy_ok = true;
        return out;
    }

    BlockOutcome uncoupled_block(const VectorXd& u1, const VectorXd& u2,
                                 Rng& rng) const override {
        TorusCoupleResult r =
            shifted_coupling_block_torus(m_, u1[0], u2[0], rng, cfg_.rejection_cap);
        BlockOutcome out;
        out.u1_end = VectorXd::Constant(1, r.z1);
        out.u2_end = VectorXd::Constant(1, r.z2);
        out.equal = (u1[0] == u2[0]) && r.coupled;
        out.terminal_low_equal = r.coupled;
        out.energy_ok = true;
        out.attempted = true;
        out.attempt_success = r.coupled;
        out.trials = r.trials;
        return out;
    }

    EnergyProfile direct_energy_profile(const VectorXd&, const VectorXd&, int,
                                        Rng&) const override {
        return {};
    }

private:
    dyn::TorusModel m_;
    SchedulerConfig cfg_;
};

} // namespace

std::unique_ptr<PairKit> make_torus_kit(dyn::TorusModel m, SchedulerConfig cfg) {
    return std::make_unique<TorusKit>(std::move(m), cfg);
}

} // namespace couplab::engine
