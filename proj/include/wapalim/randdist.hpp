#pragma once

#include <cstdint>
#include <random>

namespace wapalim {

// All samplers draw from an explicit Rng stream; nothing in this module keeps
// global state. The distribution implementations are our own so that a fixed
// seed yields the same sequence on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream);

    // uniform on (0,1), never exactly 0 or 1
    double uniform();
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal();  // standard normal via inverse CDF
    double normal(double mu, double sigma) { return mu + sigma * normal(); }
    double exponential(double rate = 1.0);

    // Marsaglia-Tsang squeeze/rejection, valid for all shape > 0.
    double gamma(double shape, double scale);
    // mean = 1 / (scale_inv * (shape - 1)) under the b-inside-reciprocal
    // convention: density ∝ x^{-shape-1} exp(-1/(b x)) with b = scale.
    double inv_gamma(double shape, double scale);
    double beta(double a, double b);
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next_raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// log Φ(x), stable over the full double range (asymptotic expansion in the
// far left tail where erfc underflows).
double log_norm_cdf(double x);
double norm_pdf(double x);

// d* = wavelet coefficient minus the linear-part contribution, observed with
// N(θ, σ²) noise under a DE(τ) prior on θ.
struct ThetaPosteriorParams {
    double d_star;
    double sigma2;
    double tau;
};

// log of the marginal m(d*|σ², τ) of a N(θ,σ²) likelihood under a DE(τ)
// prior, computed entirely in the log domain.
double log_marginal_de(const ThetaPosteriorParams& p);

// Mixing weight p_j = ε·m / ((1-ε)·φ(d*|0,σ²) + ε·m), log-domain stable.
double posterior_weight(const ThetaPosteriorParams& p, double eps);

// Draw from N(mu, sigma²) conditioned on the result being >= lower.
// lower = -infinity degenerates to a plain normal draw. Uses naive rejection
// for small standardized bounds and an exponential-proposal tail rejection
// (Robert 1995) beyond the crossover point.
double sample_trunc_normal_lower(Rng& rng, double mu, double sigma, double lower);

// Draw θ from the two-sided truncated-normal mixture posterior
// h(θ | d*, σ², τ).
double sample_post_theta(Rng& rng, const ThetaPosteriorParams& p);

// GIG(a, b, p) with p fixed at 1/2, via the reciprocal inverse-Gaussian
// construction. Mean is √(b/a)·(1 + 1/√(ab)).
double sample_gig_half(Rng& rng, double a, double b);

}  // namespace wapalim
