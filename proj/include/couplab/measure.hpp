#pragma once

#include "couplab/errors.hpp"
#include "couplab/rng.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace couplab::measure {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Finite nonnegative measure on labelled points.
struct FiniteMeasure {
    std::vector<std::string> support;
    VectorXd weights;

    FiniteMeasure() = default;
    FiniteMeasure(std::vector<std::string> labels, VectorXd w);

    double mass() const { return weights.size() ? weights.sum() : 0.0; }
    int size() const { return static_cast<int>(support.size()); }
};

/// Validates mass within 1e-9 of 1 and renormalizes the residual float error.
FiniteMeasure as_probability(FiniteMeasure mu);

/// Joint law on row_support x col_support.
struct CouplingMatrix {
    std::vector<std::string> row_support;
    std::vector<std::string> col_support;
    MatrixXd joint; // joint(i, j) >= 0

    VectorXd row_marginal() const { return joint.rowwise().sum(); }
    VectorXd col_marginal() const { return joint.colwise().sum(); }
    /// P(Z1 = Z2): diagonal mass over shared labels.
    double diag_mass() const;
};

/// Rewrites both measures on the union support (first's order, then new labels).
std::pair<FiniteMeasure, FiniteMeasure> align(const FiniteMeasure& a, const FiniteMeasure& b);

double tv_distance(const FiniteMeasure& mu1, const FiniteMeasure& mu2);
FiniteMeasure meet(const FiniteMeasure& mu1, const FiniteMeasure& mu2);
FiniteMeasure pos_part(const FiniteMeasure& mu1, const FiniteMeasure& mu2);

/// Explicit maximal coupling: diag(mu1 ^ mu2) + (mu1-mu2)+ (x) (mu2-mu1)+ / tv.
CouplingMatrix maximal_coupling_exact(const FiniteMeasure& mu1, const FiniteMeasure& mu2);

/// (1 - 1/p) * (massA^p / (p C))^(1/(p-1)); requires p > 1, C > 1.
/// Lower-bounds the meet mass on A when C dominates the restricted (p+1)-moment
/// of the density ratio.
double coupling_meet_lower_bound(double p, double C, double massA);

/// Coupling of (mu1, mu2) whose image under (f0, f0) is the maximal coupling of
/// the pushforwards. Built as s + r: s integrates the product of conditional
/// laws against the image meet, r couples the leftovers independently.
CouplingMatrix pushforward_coupling(const FiniteMeasure& mu1, const FiniteMeasure& mu2,
                                    const std::function<std::string(const std::string&)>& f0);

/// Outcome of one maximal-coupling draw.
template <class Z>
struct CoupleDraw {
    Z z1;
    Z z2;
    bool coupled;
    long trials; // rejection iterations consumed in the second branch
};

inline constexpr long kDefaultRejectionCap = 1'000'000;

/// Rejection realization of the maximal coupling of two samplable laws.
///
/// `log_ratio` evaluates log(d mu2 / d mu1) at a sampled point (either law's
/// measure-theoretic density ratio; +-inf admitted for disjoint parts).
/// Draw Z1 ~ mu1, accept equality with min(1, ratio); otherwise draw Z2 ~ mu2
/// until it lands in the (mu2 - mu1)+ part. Marginals are exact and
/// P(coupled) = (mu1 ^ mu2)(total).
template <class Z, class S1, class R, class S2>
CoupleDraw<Z> maximal_coupling_sample(S1&& sample1, R&& log_ratio, S2&& sample2, Rng& rng,
                                      long cap = kDefaultRejectionCap) {
    Z z1 = sample1(rng);
    double lr = log_ratio(z1);
    if (rng.uniform01() <= std::exp(std::min(0.0, lr)))
        return {z1, z1, true, 0};
    for (long it = 1; it <= cap; ++it) {
        Z z2 = sample2(rng);
        double lr2 = log_ratio(z2);
        // accept when above min(1, dmu1/dmu2), i.e. in (mu2 - mu1)+
        if (rng.uniform01() > std::exp(std::min(0.0, -lr2)))
            return {z1, z2, false, it};
    }
    throw CouplingFailure("maximal_coupling_sample: rejection cap exceeded");
}

/// Bundles a density-ratio evaluator with the measure it is relative to.
template <class Z>
struct DensityRatioOracle {
    /// log(d mu2 / d mu1) at z when reference_is_first, else log(d mu1 / d mu2).
    std::function<double(const Z&)> log_ratio;
    bool reference_is_first = true;

    double log_dmu2_dmu1(const Z& z) const {
        return reference_is_first ? log_ratio(z) : -log_ratio(z);
    }
};

/// Inversion sampling from a discrete probability measure (index form).
int sample_index(const FiniteMeasure& mu, Rng& rng);

} // namespace couplab::measure
