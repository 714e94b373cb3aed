#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>

namespace couplab {

/// log N(x; m2, sd2^2) - log N(x; m1, sd1^2).
inline double gauss_log_ratio_scalar(double x, double m1, double sd1, double m2, double sd2) {
    double r1 = (x - m1) / sd1;
    double r2 = (x - m2) / sd2;
    return std::log(sd1 / sd2) - 0.5 * (r2 * r2 - r1 * r1);
}

/// Real 2n x 2n representation of a C-linear map on C^n.
inline Eigen::MatrixXd complex_real_rep(const Eigen::MatrixXcd& a) {
    int n = static_cast<int>(a.rows());
    Eigen::MatrixXd r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = a.real();
    r.topRightCorner(n, n) = -a.imag();
    r.bottomLeftCorner(n, n) = a.imag();
    r.bottomRightCorner(n, n) = a.real();
    return r;
}

inline Eigen::VectorXd complex_to_real(const Eigen::VectorXcd& v) {
    int n = static_cast<int>(v.size());
    Eigen::VectorXd r(2 * n);
    r.head(n) = v.real();
    r.tail(n) = v.imag();
    return r;
}

/// Kernel log-ratio for one step of two Gaussian schemes with complex states:
/// increments are sig_i * dW with dW having iid N(0, dt) real coordinates, so
/// the step covariance is R(sig_i) R(sig_i)^T dt in real coordinates. Returns
/// log N(x; m2, Sig2) - log N(x; m1, Sig1).
inline double gauss_log_ratio_complex(const Eigen::VectorXcd& x, const Eigen::VectorXcd& m1,
                                      const Eigen::MatrixXcd& sig1, const Eigen::VectorXcd& m2,
                                      const Eigen::MatrixXcd& sig2, double dt) {
    auto term = [&](const Eigen::VectorXcd& m, const Eigen::MatrixXcd& sig) {
        Eigen::MatrixXd a = complex_real_rep(sig);
        Eigen::MatrixXd cov = a * a.transpose() * dt;
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        Eigen::VectorXd r = complex_to_real(x - m);
        double quad = r.dot(llt.solve(r));
        double logdet = 0.0;
        auto l = llt.matrixL();
        for (int i = 0; i < cov.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
        return -0.5 * (logdet + quad);
    };
    return term(m2, sig2) - term(m1, sig1);
}

} // namespace couplab
