#include "couplab/spectral.hpp"

#include "couplab/errors.hpp"

#include <cmath>

namespace couplab::dyn {

SineTransform::SineTransform(int modes, int grid) : modes_(modes), grid_(grid) {
    if (modes < 1) throw ConfigError("sine transform: need at least one mode");
    if (grid < 2 * modes) throw ConfigError("sine transform: grid must be >= 2*modes");
    synth_.resize(grid, modes);
    dsynth_.resize(grid, modes);
    mu_.resize(modes);
    const double pi = 3.14159265358979323846;
    const double rt2 = std::sqrt(2.0);
    for (int k = 0; k < modes; ++k) {
        double kp = (k + 1) * pi;
        mu_[k] = kp * kp;
        for (int j = 0; j < grid; ++j) {
            double x = static_cast<double>(j + 1) / (grid + 1);
            synth_(j, k) = rt2 * std::sin(kp * x);
            dsynth_(j, k) = rt2 * kp * std::cos(kp * x);
        }
    }
}

double sobolev_norm(const VectorXcd& coeffs, double s) {
    if (s < 0.0 || s > 3.0) throw ContractError("sobolev_norm: s outside [0,3]");
    const double pi = 3.14159265358979323846;
    double acc = 0.0;
    for (int k = 0; k < coeffs.size(); ++k) {
        double mu = (k + 1) * pi * (k + 1) * pi;
        acc += std::pow(mu, s) * std::norm(coeffs[k]);
    }
    return std::sqrt(acc);
}

double lp_norm_pow(const VectorXcd& values, double p, double quad_weight) {
    double acc = 0.0;
    for (int j = 0; j < values.size(); ++j) acc += std::pow(std::abs(values[j]), p);
    return acc * quad_weight;
}

} // namespace couplab::dyn
