#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace couplab::stats {

using Eigen::VectorXd;

/// Binomial confidence interval that stays sane at p near 0/1.
struct WilsonInterval {
    double estimate;
    double lo;
    double hi;
    long n;
};

WilsonInterval wilson(long successes, long n, double z = 1.959963984540054);

/// Weighted least squares of log(values) against times: values ~ c * exp(-beta * t).
struct ExpFit {
    double c;
    double beta;
    double r2;          // weighted, on the log scale
    double beta_stderr; // from the WLS covariance
    int n_used;         // positive points that entered the fit
};

/// Throws FitDegenerate if fewer than 3 positive values survive censoring.
ExpFit exp_fit(std::span<const double> times, std::span<const double> values,
               std::span<const double> weights = {});

/// Order-independent sum (recursive pairwise).
double pairwise_sum(std::span<const double> xs);

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);
/// Standard error of the mean.
double stderr_mean(std::span<const double> xs);

/// Standard normal CDF.
double norm_cdf(double x);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Chi-square goodness of fit of observed counts against expected probabilities.
/// Cells with expected count below `min_expected` are pooled into their neighbor.
struct Chi2Result {
    double statistic;
    int dof;
    double p_value;
};
Chi2Result chi2_gof(std::span<const long> counts, std::span<const double> probs,
                    double min_expected = 5.0);

/// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
struct KsResult {
    double statistic;
    double p_value;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Adaptive-free composite Simpson quadrature on [a, b] with n subintervals (n even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

} // namespace couplab::stats
