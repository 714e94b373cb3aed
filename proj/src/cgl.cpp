#include "couplab/cgl.hpp"

#include "couplab/errors.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <complex>

namespace couplab::dyn {

using std::complex;

NoiseOperator NoiseOperator::make(int M, int N, int N1, double sigma0, double mix, double high_amp,
                                  double high_decay) {
    if (!(N1 <= N && N <= M) || N < 1) throw ConfigError("noise operator: need 1 <= N1 <= N <= M");
    if (sigma0 <= 0) throw ConfigError("noise operator: sigma0 must be positive");
    if (mix < 0 || mix >= 1) throw ConfigError("noise operator: mix must lie in [0,1)");
    NoiseOperator op;
    op.M = M;
    op.N = N;
    op.N1 = N1;
    op.sigma0 = sigma0;
    op.mix = mix;

    // fixed dense mixer, normalized to operator norm 1
    Rng r(0x6d69786572ull); // stable key; the mixer is part of the model definition
    op.mixer.resize(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) op.mixer(i, j) = complex<double>(r.gaussian(), r.gaussian());
    Eigen::JacobiSVD<MatrixXcd> svd(op.mixer);
    double nrm = svd.singularValues()(0);
    if (nrm > 0) op.mixer /= nrm;

    op.high.resize(M - N);
    const double pi = 3.14159265358979323846;
    for (int k = N; k < M; ++k) {
        double mu = (k + 1) * pi * (k + 1) * pi;
        op.high[k - N] = high_amp / std::pow(mu, high_decay);
    }
    return op;
}

double NoiseOperator::gate(const VectorXcd& low) const {
    double s = low.head(std::min<int>(N1, static_cast<int>(low.size()))).squaredNorm();
    return std::tanh(s);
}

MatrixXcd NoiseOperator::low_block(const VectorXcd& low) const {
    return sigma0 * (MatrixXcd::Identity(N, N) + mix * gate(low) * mixer);
}

double NoiseOperator::b_bound_sq(double s) const {
    const double pi = 3.14159265358979323846;
    MatrixXcd worst = sigma0 * (MatrixXcd::Identity(N, N) + mix * mixer);
    double acc = 0.0;
    for (int m = 0; m < N; ++m) {
        double mu = (m + 1) * pi * (m + 1) * pi;
        acc += std::pow(mu, s) * worst.row(m).squaredNorm();
    }
    for (int k = N; k < M; ++k) {
        double mu = (k + 1) * pi * (k + 1) * pi;
        acc += std::pow(mu, s) * high[k - N] * high[k - N];
    }
    return acc;
}

CglModel::CglModel(double eps_, double eta_, int lambda_, double sigma_exp_, int M_, int N_,
                   int N1_, double dt_, double T_, CglCase c, NoiseOperator op, int grid)
    : eps(eps_), eta(eta_), lambda(lambda_), sigma_exp(sigma_exp_), M(M_), N(N_), N1(N1_), dt(dt_),
      T(T_), case_tag(c), noise(std::move(op)) {
    if (eps <= 0 || eta <= 0) throw ConfigError("cgl: eps and eta must be positive");
    if (lambda != 1 && lambda != -1) throw ConfigError("cgl: lambda must be +-1");
    if (sigma_exp <= 0) throw ConfigError("cgl: sigma must be positive");
    if (case_tag == CglCase::L2Subcritical && sigma_exp >= 1.5)
        throw ConfigError("cgl L2 case: sigma must be < min(2/d, 3/2) = 3/2 for d = 1");
    if (case_tag == CglCase::H1Subcritical && lambda != 1)
        throw ConfigError("cgl H1 case: defocusing (lambda = 1) required");
    if (!(1 <= N1 && N1 <= N && N <= M)) throw ConfigError("cgl: need 1 <= N1 <= N <= M");
    if (dt <= 0 || T <= 0) throw ConfigError("cgl: dt and T must be positive");
    if (noise.M != M || noise.N != N) throw ConfigError("cgl: noise operator shape mismatch");

    int g = grid > 0 ? grid : 4 * M;
    tr = SineTransform(M, g);
    lin.resize(M);
    for (int k = 0; k < M; ++k)
        lin[k] = std::exp(-complex<double>(eps, 1.0) * tr.eigenvalues()[k] * dt);
    dealias_keep = (2 * M) / 3;
}

VectorXcd nonlinearity(const CglModel& m, const VectorXcd& u) {
    VectorXcd vals = m.tr.to_values(u);
    for (int j = 0; j < vals.size(); ++j) {
        double a2 = std::norm(vals[j]);
        vals[j] *= std::pow(a2, m.sigma_exp);
    }
    VectorXcd c = m.tr.to_coeffs(vals);
    c.tail(m.M - m.dealias_keep).setZero();
    return complex<double>(m.eta, static_cast<double>(m.lambda)) * c;
}

VectorXcd step_cgl(const CglModel& m, const VectorXcd& u, const VectorXcd& dW,
                   double t_for_error) {
    VectorXcd nl = nonlinearity(m, u);
    VectorXcd out(m.M);
    // noise through the block operator
    VectorXcd bw(m.M);
    bw.head(m.N) = m.noise.low_block(u.head(m.N)) * dW.head(m.N);
    bw.tail(m.M - m.N) =
        m.noise.high.cast<complex<double>>().cwiseProduct(dW.tail(m.M - m.N));
    out = m.lin.cwiseProduct(u) - nl * m.dt + bw;
    double mx = out.cwiseAbs().maxCoeff();
    if (!std::isfinite(mx) || mx > m.blowup_threshold) throw BlowUpError(t_for_error);
    return out;
}

SpectralPath simulate_cgl(const CglModel& m, const VectorXcd& u0, int n_steps, Rng& rng,
                          double t_offset) {
    SpectralPath p;
    p.grid = {m.dt, n_steps};
    p.states.resize(n_steps + 1, m.M);
    p.dw.resize(n_steps, m.M);
    p.states.row(0) = u0.transpose();
    double sq = std::sqrt(m.dt);
    for (int i = 0; i < n_steps; ++i) {
        for (int k = 0; k < m.M; ++k)
            p.dw(i, k) = complex<double>(sq * rng.gaussian(), sq * rng.gaussian());
        VectorXcd next = step_cgl(m, p.states.row(i).transpose(), p.dw.row(i).transpose(),
                                  t_offset + (i + 1) * m.dt);
        p.states.row(i + 1) = next.transpose();
    }
    return p;
}

MatrixXcd phi_reconstruct_cgl(const CglModel& m, const MatrixXcd& xpath, const MatrixXcd& deta,
                              const VectorXcd& u0, double t_offset) {
    int n = static_cast<int>(deta.rows());
    if (xpath.rows() != n + 1) throw ContractError("phi_reconstruct: xpath/deta grid mismatch");
    if (xpath.cols() != m.N || deta.cols() != m.M - m.N)
        throw ContractError("phi_reconstruct: channel width mismatch");
    int nh = m.M - m.N;
    MatrixXcd y(n + 1, nh);
    y.row(0) = u0.tail(nh).transpose();
    VectorXcd full(m.M);
    for (int i = 0; i < n; ++i) {
        full.head(m.N) = xpath.row(i).transpose();
        full.tail(nh) = y.row(i).transpose();
        VectorXcd nl = nonlinearity(m, full);
        VectorXcd noise =
            m.noise.high.cast<complex<double>>().cwiseProduct(deta.row(i).transpose());
        y.row(i + 1) =
            (m.lin.tail(nh).cwiseProduct(y.row(i).transpose()) - nl.tail(nh) * m.dt + noise)
                .transpose();
        double mx = y.row(i + 1).cwiseAbs().maxCoeff();
        if (!std::isfinite(mx) || mx > m.blowup_threshold)
            throw BlowUpError(t_offset + (i + 1) * m.dt);
    }
    return y;
}

double lyapunov(const CglModel& m, const VectorXcd& u) {
    if (m.case_tag == CglCase::L2Subcritical) return u.squaredNorm();
    double h1 = sobolev_norm(u, 1.0);
    double p = 2.0 * m.sigma_exp + 2.0;
    double lp = lp_norm_pow(m.tr.to_values(u), p, m.tr.quad_weight());
    return 0.5 * h1 * h1 + lp / p;
}

namespace {

Eigen::Vector3d energy_integrand(const CglModel& m, const VectorXcd& u) {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    if (m.case_tag == CglCase::L2Subcritical) {
        double h1 = sobolev_norm(u, 1.0);
        g[0] = m.eps * h1 * h1;
        return g;
    }
    double h2 = sobolev_norm(u, 2.0);
    g[0] = 0.5 * m.eps * h2 * h2;
    VectorXcd vals = m.tr.to_values(u);
    g[1] = 0.5 * m.eta * lp_norm_pow(vals, 4.0 * m.sigma_exp + 2.0, m.tr.quad_weight());
    VectorXcd dv = m.tr.deriv_values(u);
    double acc = 0.0;
    for (int j = 0; j < vals.size(); ++j)
        acc += std::pow(std::norm(vals[j]), m.sigma_exp) * std::norm(dv[j]);
    g[2] = (m.eta + m.eps) * acc * m.tr.quad_weight();
    return g;
}

} // namespace

EnergyLedger energy_start(const CglModel& m, const VectorXcd& u, double t0) {
    EnergyLedger led;
    led.t0 = led.t = t0;
    led.terminal = lyapunov(m, u);
    led.prev = energy_integrand(m, u);
    return led;
}

void energy_update(const CglModel& m, EnergyLedger& led, const VectorXcd& u, double dt) {
    Eigen::Vector3d g = energy_integrand(m, u);
    led.integrals += 0.5 * dt * (led.prev + g);
    led.prev = g;
    led.terminal = lyapunov(m, u);
    led.t += dt;
}

MatrixXcd girsanov_drift_binding_cgl(const CglModel& m, const MatrixXcd& zpath,
                                     const MatrixXcd& deta, const VectorXcd& u01,
                                     const VectorXcd& u02, int tau_steps) {
    int n = static_cast<int>(deta.rows());
    MatrixXcd phi1 = phi_reconstruct_cgl(m, zpath, deta, u01);
    MatrixXcd phi2 = phi_reconstruct_cgl(m, zpath, deta, u02);
    MatrixXcd d = MatrixXcd::Zero(n, m.N);
    VectorXcd full1(m.M), full2(m.M);
    for (int i = 0; i < std::min(n, tau_steps); ++i) {
        full1.head(m.N) = zpath.row(i).transpose();
        full1.tail(m.M - m.N) = phi1.row(i).transpose();
        full2.head(m.N) = zpath.row(i).transpose();
        full2.tail(m.M - m.N) = phi2.row(i).transpose();
        VectorXcd df = nonlinearity(m, full2).head(m.N) - nonlinearity(m, full1).head(m.N);
        MatrixXcd sl = m.noise.low_block(zpath.row(i).transpose());
        d.row(i) = sl.partialPivLu().solve(df).transpose();
    }
    return d;
}

MatrixXcd recover_dbeta_cgl(const CglModel& m, const MatrixXcd& zpath, const MatrixXcd& deta,
                            const VectorXcd& u0, int tau_steps) {
    int n = static_cast<int>(deta.rows());
    MatrixXcd phi = phi_reconstruct_cgl(m, zpath, deta, u0);
    MatrixXcd dbeta(n, m.N);
    VectorXcd full(m.M);
    for (int i = 0; i < n; ++i) {
        VectorXcd z = zpath.row(i).transpose();
        VectorXcd resid = zpath.row(i + 1).transpose() - m.lin.head(m.N).cwiseProduct(z);
        if (i < tau_steps) {
            full.head(m.N) = z;
            full.tail(m.M - m.N) = phi.row(i).transpose();
            resid += nonlinearity(m, full).head(m.N) * m.dt;
        }
        MatrixXcd sl = m.noise.low_block(z);
        dbeta.row(i) = sl.partialPivLu().solve(resid).transpose();
    }
    return dbeta;
}

} // namespace couplab::dyn
