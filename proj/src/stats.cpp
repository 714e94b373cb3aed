#include "couplab/stats.hpp"

#include "couplab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace couplab::stats {

WilsonInterval wilson(long successes, long n, double z) {
    if (n <= 0) throw ContractError("wilson: n must be positive");
    double p = static_cast<double>(successes) / static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half), n};
}

ExpFit exp_fit(std::span<const double> times, std::span<const double> values,
               std::span<const double> weights) {
    if (times.size() != values.size())
        throw ContractError("exp_fit: times/values size mismatch");
    if (!weights.empty() && weights.size() != values.size())
        throw ContractError("exp_fit: weights size mismatch");

    std::vector<double> t, y, w;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0) {
            t.push_back(times[i]);
            y.push_back(std::log(values[i]));
            w.push_back(weights.empty() ? 1.0 : weights[i]);
        }
    }
    int n = static_cast<int>(t.size());
    if (n < 3) throw FitDegenerate("exp_fit: fewer than 3 positive points");

    double sw = 0, swt = 0, swy = 0, swtt = 0, swty = 0;
    for (int i = 0; i < n; ++i) {
        sw += w[i];
        swt += w[i] * t[i];
        swy += w[i] * y[i];
        swtt += w[i] * t[i] * t[i];
        swty += w[i] * t[i] * y[i];
    }
    double det = sw * swtt - swt * swt;
    if (det <= 0) throw FitDegenerate("exp_fit: degenerate time grid");
    double slope = (sw * swty - swt * swy) / det;
    double intercept = (swy - slope * swt) / sw;

    double ybar = swy / sw;
    double ss_tot = 0, ss_res = 0;
    for (int i = 0; i < n; ++i) {
        double fit = intercept + slope * t[i];
        ss_res += w[i] * (y[i] - fit) * (y[i] - fit);
        ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    // variance of slope under the WLS model, residual-scaled
    double sigma2 = n > 2 ? ss_res / (n - 2) : 0.0;
    double slope_var = sigma2 * sw / det;

    return {std::exp(intercept), -slope, r2, std::sqrt(std::max(0.0, slope_var)), n};
}

double pairwise_sum(std::span<const double> xs) {
    size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw ContractError("mean of empty sample");
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
    size_t n = xs.size();
    if (n < 2) return 0.0;
    double m = mean(xs);
    std::vector<double> dev(n);
    for (size_t i = 0; i < n; ++i) dev[i] = (xs[i] - m) * (xs[i] - m);
    return std::sqrt(pairwise_sum(dev) / static_cast<double>(n - 1));
}

double stderr_mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

namespace {

// Regularized lower incomplete gamma by series (x < a+1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw ContractError("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

Chi2Result chi2_gof(std::span<const long> counts, std::span<const double> probs,
                    double min_expected) {
    if (counts.size() != probs.size() || counts.empty())
        throw ContractError("chi2_gof: size mismatch");
    long n = 0;
    for (long c : counts) n += c;
    if (n == 0) throw ContractError("chi2_gof: empty sample");

    // pool low-expectation cells left to right
    std::vector<double> exp_pooled;
    std::vector<double> obs_pooled;
    double e_acc = 0, o_acc = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
        e_acc += probs[i] * n;
        o_acc += counts[i];
        if (e_acc >= min_expected) {
            exp_pooled.push_back(e_acc);
            obs_pooled.push_back(o_acc);
            e_acc = o_acc = 0;
        }
    }
    if (e_acc > 0 || o_acc > 0) {
        if (exp_pooled.empty()) {
            exp_pooled.push_back(e_acc);
            obs_pooled.push_back(o_acc);
        } else {
            exp_pooled.back() += e_acc;
            obs_pooled.back() += o_acc;
        }
    }
    int k = static_cast<int>(exp_pooled.size());
    double stat = 0;
    for (int i = 0; i < k; ++i) {
        double d = obs_pooled[i] - exp_pooled[i];
        stat += d * d / exp_pooled[i];
    }
    int dof = std::max(1, k - 1);
    return {stat, dof, gamma_q(dof / 2.0, stat / 2.0)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ContractError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    double ne = std::sqrt(na * nb / (na + nb));
    double lambda = (ne + 0.12 + 0.11 / ne) * d;
    // Kolmogorov tail: 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2)
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * sign * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::fabs(term) < 1e-12) break;
        sign = -sign;
    }
    return {d, std::clamp(p, 0.0, 1.0)};
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0 || n < 2) throw ContractError("simpson: n must be even and >= 2");
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace couplab::stats
