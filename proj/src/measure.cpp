#include "couplab/measure.hpp"

#include <map>
#include <set>

namespace couplab::measure {

FiniteMeasure::FiniteMeasure(std::vector<std::string> labels, VectorXd w)
    : support(std::move(labels)), weights(std::move(w)) {
    if (static_cast<int>(support.size()) != weights.size())
        throw InvalidMeasure("support/weights size mismatch");
    std::set<std::string> seen;
    for (const auto& s : support)
        if (!seen.insert(s).second) throw InvalidMeasure("duplicate support label: " + s);
    for (int i = 0; i < weights.size(); ++i)
        if (!(weights[i] >= 0.0)) throw InvalidMeasure("negative or NaN weight at " + support[i]);
}

FiniteMeasure as_probability(FiniteMeasure mu) {
    double m = mu.mass();
    if (std::fabs(m - 1.0) > 1e-9)
        throw InvalidMeasure("measure mass " + std::to_string(m) + " is not 1");
    if (m != 1.0 && m > 0.0) mu.weights /= m;
    return mu;
}

double CouplingMatrix::diag_mass() const {
    std::map<std::string, int> col_of;
    for (size_t j = 0; j < col_support.size(); ++j) col_of[col_support[j]] = static_cast<int>(j);
    double s = 0.0;
    for (size_t i = 0; i < row_support.size(); ++i) {
        auto it = col_of.find(row_support[i]);
        if (it != col_of.end()) s += joint(static_cast<int>(i), it->second);
    }
    return s;
}

std::pair<FiniteMeasure, FiniteMeasure> align(const FiniteMeasure& a, const FiniteMeasure& b) {
    std::vector<std::string> labels = a.support;
    std::set<std::string> have(a.support.begin(), a.support.end());
    for (const auto& s : b.support)
        if (have.insert(s).second) labels.push_back(s);

    auto lift = [&labels](const FiniteMeasure& m) {
        std::map<std::string, double> w;
        for (int i = 0; i < m.size(); ++i) w[m.support[i]] = m.weights[i];
        VectorXd v(static_cast<int>(labels.size()));
        for (size_t i = 0; i < labels.size(); ++i) {
            auto it = w.find(labels[i]);
            v[static_cast<int>(i)] = it == w.end() ? 0.0 : it->second;
        }
        return FiniteMeasure(labels, v);
    };
    return {lift(a), lift(b)};
}

double tv_distance(const FiniteMeasure& mu1, const FiniteMeasure& mu2) {
    auto [a, b] = align(as_probability(mu1), as_probability(mu2));
    return 0.5 * (a.weights - b.weights).cwiseAbs().sum();
}

FiniteMeasure meet(const FiniteMeasure& mu1, const FiniteMeasure& mu2) {
    auto [a, b] = align(as_probability(mu1), as_probability(mu2));
    return FiniteMeasure(a.support, a.weights.cwiseMin(b.weights));
}

FiniteMeasure pos_part(const FiniteMeasure& mu1, const FiniteMeasure& mu2) {
    auto [a, b] = align(as_probability(mu1), as_probability(mu2));
    return FiniteMeasure(a.support, (a.weights - b.weights).cwiseMax(0.0));
}

CouplingMatrix maximal_coupling_exact(const FiniteMeasure& mu1, const FiniteMeasure& mu2) {
    auto [a, b] = align(as_probability(mu1), as_probability(mu2));
    int n = a.size();
    VectorXd mn = a.weights.cwiseMin(b.weights);
    VectorXd pp = (a.weights - b.weights).cwiseMax(0.0);
    VectorXd pm = (b.weights - a.weights).cwiseMax(0.0);
    double tv = pp.sum();

    MatrixXd joint = mn.asDiagonal();
    if (tv > 0.0) joint += pp * pm.transpose() / tv;
    return {a.support, a.support, std::move(joint)};
}

double coupling_meet_lower_bound(double p, double C, double massA) {
    if (!(p > 1.0)) throw ConfigError("coupling_meet_lower_bound: p must exceed 1");
    if (!(C > 1.0)) throw ConfigError("coupling_meet_lower_bound: C must exceed 1");
    if (massA < 0.0 || massA > 1.0)
        throw ConfigError("coupling_meet_lower_bound: massA outside [0,1]");
    if (massA == 0.0) return 0.0;
    return (1.0 - 1.0 / p) * std::pow(std::pow(massA, p) / (p * C), 1.0 / (p - 1.0));
}

CouplingMatrix pushforward_coupling(const FiniteMeasure& mu1, const FiniteMeasure& mu2,
                                    const std::function<std::string(const std::string&)>& f0) {
    auto [a, b] = align(as_probability(mu1), as_probability(mu2));
    int n = a.size();

    // image measures and fibers
    std::vector<std::string> image_of(n);
    std::map<std::string, std::vector<int>> fiber;
    for (int i = 0; i < n; ++i) {
        image_of[i] = f0(a.support[i]);
        fiber[image_of[i]].push_back(i);
    }
    std::map<std::string, double> nu1, nu2;
    for (int i = 0; i < n; ++i) {
        nu1[image_of[i]] += a.weights[i];
        nu2[image_of[i]] += b.weights[i];
    }

    MatrixXd joint = MatrixXd::Zero(n, n);

    // s-part: product of conditional laws against the image meet
    for (auto& [x, idx] : fiber) {
        double m = std::min(nu1[x], nu2[x]);
        if (m <= 0.0) continue;
        for (int i : idx)
            for (int j : idx)
                joint(i, j) += m * (a.weights[i] / nu1[x]) * (b.weights[j] / nu2[x]);
    }

    // r-part: leftovers coupled independently, normalized by the image tv mass
    double tv_img = 0.0;
    for (auto& [x, w1] : nu1) tv_img += std::max(0.0, w1 - nu2[x]);
    if (tv_img > 0.0) {
        VectorXd r1 = VectorXd::Zero(n), r2 = VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            const std::string& x = image_of[i];
            double rho1 = std::max(0.0, nu1[x] - nu2[x]);
            double rho2 = std::max(0.0, nu2[x] - nu1[x]);
            if (nu1[x] > 0.0) r1[i] = a.weights[i] / nu1[x] * rho1;
            if (nu2[x] > 0.0) r2[i] = b.weights[i] / nu2[x] * rho2;
        }
        joint += r1 * r2.transpose() / tv_img;
    }
    return {a.support, a.support, std::move(joint)};
}

int sample_index(const FiniteMeasure& mu, Rng& rng) {
    double u = rng.uniform01() * mu.mass();
    double acc = 0.0;
    for (int i = 0; i < mu.size(); ++i) {
        acc += mu.weights[i];
        if (u < acc) return i;
    }
    return mu.size() - 1;
}

} // namespace couplab::measure
