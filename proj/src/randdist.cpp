#include "wapalim/randdist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wapalim {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

double logsumexp2(double a, double b) {
    const double m = a > b ? a : b;
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Acklam's rational approximation for the standard normal quantile.
double norm_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream))) {}

double Rng::uniform() {
    // 53 random bits, offset by half an ulp so the result is strictly in (0,1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
}

double Rng::normal() {
    const double p = uniform();
    double x = norm_quantile_approx(p);
    // one Halley refinement brings the approximation to near machine precision
    const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
    const double u = e * std::exp(kLogSqrt2Pi + 0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double Rng::exponential(double rate) { return -std::log(uniform()) / rate; }

double Rng::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma: shape and scale must be positive");
    if (shape < 1.0) {
        // boost: G(a) = G(a+1) * U^{1/a}
        const double g = gamma(shape + 1.0, scale);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double Rng::inv_gamma(double shape, double scale) { return 1.0 / gamma(shape, scale); }

double Rng::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

double norm_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double log_norm_cdf(double x) {
    if (x > -30.0) return std::log(0.5 * std::erfc(-x / kSqrt2));
    // asymptotic expansion: Φ(x) ~ φ(x)/(-x) · (1 - 1/x² + 3/x⁴ - ...)
    const double r = 1.0 / (x * x);
    const double series =
        -r * (1.0 - r * (3.0 - r * (15.0 - r * (105.0 - r * (945.0 - r * 10395.0)))));
    return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log1p(series);
}

double log_marginal_de(const ThetaPosteriorParams& p) {
    if (!std::isfinite(p.d_star) || !(p.sigma2 > 0.0) || !(p.tau > 0.0))
        throw std::invalid_argument("log_marginal_de: requires finite d*, sigma2 > 0, tau > 0");
    const double sigma = std::sqrt(p.sigma2);
    const double ts = p.tau * sigma;
    const double lpos = -p.d_star * p.tau + log_norm_cdf(p.d_star / sigma - ts);
    const double lneg = p.d_star * p.tau + log_norm_cdf(-p.d_star / sigma - ts);
    return std::log(p.tau / 2.0) + 0.5 * p.sigma2 * p.tau * p.tau + logsumexp2(lpos, lneg);
}

double posterior_weight(const ThetaPosteriorParams& p, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("posterior_weight: eps must be in [0,1]");
    if (eps <= 0.0) return 0.0;
    if (eps >= 1.0) return 1.0;
    const double log_m = log_marginal_de(p);
    const double log_f0 =
        -0.5 * std::log(2.0 * M_PI * p.sigma2) - p.d_star * p.d_star / (2.0 * p.sigma2);
    // p_j = 1 / (1 + exp(t)),  t = log((1-ε) f0) - log(ε m)
    const double t = std::log1p(-eps) + log_f0 - std::log(eps) - log_m;
    if (t > 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

double sample_trunc_normal_lower(Rng& rng, double mu, double sigma, double lower) {
    if (lower == -std::numeric_limits<double>::infinity()) return rng.normal(mu, sigma);
    const double alpha = (lower - mu) / sigma;
    // acceptance-rate crossover between the two rejection schemes
    constexpr double kSwitch = 0.45;
    double z;
    if (alpha <= kSwitch) {
        do {
            z = rng.normal();
        } while (z < alpha);
    } else {
        const double lambda = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
        for (;;) {
            z = alpha + rng.exponential(lambda);
            const double rho = std::exp(-0.5 * (z - lambda) * (z - lambda));
            if (rng.uniform() <= rho) break;
        }
    }
    return mu + sigma * z;
}

double sample_post_theta(Rng& rng, const ThetaPosteriorParams& p) {
    if (!std::isfinite(p.d_star) || !(p.sigma2 > 0.0) || !(p.tau > 0.0))
        throw std::invalid_argument("sample_post_theta: requires finite d*, sigma2 > 0, tau > 0");
    const double sigma = std::sqrt(p.sigma2);
    const double ts = p.tau * sigma;
    const double lpos = -p.d_star * p.tau + log_norm_cdf(p.d_star / sigma - ts);
    const double lneg = p.d_star * p.tau + log_norm_cdf(-p.d_star / sigma - ts);
    const double w_pos = 1.0 / (1.0 + std::exp(lneg - lpos));
    if (rng.bernoulli(w_pos)) {
        return sample_trunc_normal_lower(rng, p.d_star - p.sigma2 * p.tau, sigma, 0.0);
    }
    return -sample_trunc_normal_lower(rng, -p.d_star - p.sigma2 * p.tau, sigma, 0.0);
}

double sample_gig_half(Rng& rng, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("sample_gig_half: a and b must be positive");
    // X ~ GIG(a,b,1/2)  <=>  1/X ~ InverseGaussian(mu = sqrt(a/b), lambda = a)
    const double mu = std::sqrt(a / b);
    const double lambda = a;
    const double nu = rng.normal();
    const double y = nu * nu;
    const double x = mu + 0.5 * mu * mu * y / lambda -
                     0.5 * (mu / lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    const double ig = (rng.uniform() <= mu / (mu + x)) ? x : mu * mu / x;
    return 1.0 / ig;
}

}  // namespace wapalim
