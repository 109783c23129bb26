#include "wapalim/plm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wapalim {

namespace {

double median(std::vector<double> v) {
    const auto mid = v.begin() + v.size() / 2;
    std::nth_element(v.begin(), mid, v.end());
    double hi = *mid;
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), mid);
        return 0.5 * (lo + hi);
    }
    return hi;
}

double soft_threshold(double x, double lambda) {
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return 0.0;
}

// P = 1 / (1 + exp(t)) without overflow
double sigmoid_neg(double t) {
    if (t > 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

}  // namespace

int default_coarsest_level(int n) {
    const int J = log2_exact(n);
    const int j0 = static_cast<int>(std::floor(std::log2(std::log(static_cast<double>(n))) + 1.0));
    return std::clamp(j0, 0, J - 1);
}

std::pair<int, int> ModelInput::level_range(int j) const {
    const int begin = (1 << j) - (1 << J0);
    return {begin, begin + (1 << j)};
}

ModelInput make_model_input(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                            const FilterBank& filter, int J0) {
    const int n = static_cast<int>(Y.size());
    if (!is_power_of_two(n))
        throw std::invalid_argument("make_model_input: n must be a power of two");
    if (X.rows() != 0 && X.rows() != n)
        throw std::invalid_argument("make_model_input: X row count must match Y");

    ModelInput in;
    in.n = n;
    in.p = static_cast<int>(X.cols());
    in.J0 = J0;
    in.filter = filter;

    std::vector<double> y(Y.data(), Y.data() + n);
    const auto dy = flatten(dwt(y, filter, J0));
    const int ns = 1 << J0;
    in.d_scaling = Eigen::VectorXd::Map(dy.data(), ns);
    in.d_detail = Eigen::VectorXd::Map(dy.data() + ns, n - ns);

    if (in.p > 0) {
        const Eigen::MatrixXd U = transform_design(X, filter, J0);
        in.U_scaling = U.topRows(ns);
        in.U_detail = U.bottomRows(n - ns);
    } else {
        in.U_scaling.resize(ns, 0);
        in.U_detail.resize(n - ns, 0);
    }

    in.level_of.resize(n - ns);
    const int J = log2_exact(n);
    for (int j = J0; j < J; ++j) {
        const auto [b, e] = in.level_range(j);
        for (int i = b; i < e; ++i) in.level_of[i] = j;
    }
    return in;
}

Hyperparameters default_hyperparameters(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                                        const FilterBank& filter, int J0) {
    const int n = static_cast<int>(Y.size());
    if (!is_power_of_two(n))
        throw std::invalid_argument("default_hyperparameters: n must be a power of two");
    const int p = static_cast<int>(X.cols());

    Hyperparameters hp;  // a1 = 2, a2 = 2, a3 = 1

    Eigen::VectorXd beta_ols = Eigen::VectorXd::Zero(p);
    if (p > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        if (qr.rank() < p)
            throw std::runtime_error("default_hyperparameters: design matrix is rank deficient");
        beta_ols = qr.solve(Y);
    }
    const Eigen::VectorXd Yf = (p > 0) ? Eigen::VectorXd(Y - X * beta_ols) : Y;

    // robust noise scale from the finest-level detail coefficients of Y_f
    std::vector<double> yf(Yf.data(), Yf.data() + n);
    const auto coeffs = dwt(yf, filter, J0);
    const int J = log2_exact(n);
    const auto [fb, fe] = coeffs.level_range(J - 1);
    std::vector<double> finest;
    finest.reserve(fe - fb);
    for (int i = fb; i < fe; ++i) finest.push_back(std::abs(coeffs.details[i]));
    const double mad = median(std::move(finest));

    const double var_y = (Y.array() - Y.mean()).square().sum() / std::max(1, n - 1);
    double sigma2_hat = (mad / 0.6745) * (mad / 0.6745);
    if (sigma2_hat <= 0.0) sigma2_hat = 1e-12 * var_y + 1e-300;
    hp.b1 = 1.0 / sigma2_hat;

    const double var_f = (Yf.array() - Yf.mean()).square().sum() / std::max(1, n - 1);
    double tau_hat;
    if (var_f > sigma2_hat)
        tau_hat = std::min(1.0 / std::sqrt(var_f - sigma2_hat), 1e6);
    else
        tau_hat = 1e6;
    hp.b3 = tau_hat;

    double eta2_hat = 1.0;
    if (p > 0) {
        const double bmax = beta_ols.cwiseAbs().maxCoeff();
        if (bmax > 0.0) eta2_hat = (3.0 * bmax) * (3.0 * bmax);
    }
    hp.b2 = 1.0 / eta2_hat;

    return hp;
}

bool GibbsState::invariants_ok() const {
    for (int i = 0; i < beta.size(); ++i) {
        if ((gamma[i] == 0) != (beta[i] == 0.0)) return false;
        if (!(v[i] > 0.0)) return false;
    }
    for (int i = 0; i < theta.size(); ++i) {
        if ((z[i] == 0) != (theta[i] == 0.0)) return false;
    }
    if (!(eta2 > 0.0) || !(sigma2 > 0.0) || !(tau_theta > 0.0)) return false;
    if (!(q >= 0.0 && q <= 1.0)) return false;
    for (double e : eps)
        if (!(e >= 0.0 && e <= 1.0)) return false;
    return true;
}

GibbsSampler::GibbsSampler(const ModelInput& input, const Hyperparameters& hyper)
    : input_(input), hyper_(hyper) {
    if (hyper_.burn_in < 0 || hyper_.n_iter <= hyper_.burn_in)
        throw std::invalid_argument("GibbsSampler: need n_iter > burn_in >= 0");
    col_norms_.resize(input_.p);
    for (int i = 0; i < input_.p; ++i) col_norms_[i] = input_.U_detail.col(i).squaredNorm();

    beta_ols_ = Eigen::VectorXd::Zero(input_.p);
    if (input_.p > 0) {
        Eigen::MatrixXd U(input_.n, input_.p);
        U << input_.U_scaling, input_.U_detail;
        Eigen::VectorXd d(input_.n);
        d << input_.d_scaling, input_.d_detail;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(U);
        if (qr.rank() < input_.p)
            throw std::runtime_error("GibbsSampler: design matrix is rank deficient");
        beta_ols_ = qr.solve(d);
    }
}

GibbsState GibbsSampler::initial_state() const {
    GibbsState s;
    const int p = input_.p;
    const int nd = input_.n_detail();

    s.beta = beta_ols_;
    s.gamma.assign(p, 1);
    s.v = Eigen::VectorXd::Ones(p);
    s.eta2 = 1.0 / hyper_.b2;
    s.q = 0.5;
    s.sigma2 = 1.0 / hyper_.b1;
    s.tau_theta = hyper_.b3;

    // data-driven warm start: soft-threshold the current residual at the
    // universal threshold
    const Eigen::VectorXd dstar = input_.d_detail - input_.U_detail * s.beta;
    const double lambda = std::sqrt(s.sigma2) * std::sqrt(2.0 * std::log(input_.n));
    s.theta.resize(nd);
    s.z.resize(nd);
    for (int i = 0; i < nd; ++i) {
        s.theta[i] = soft_threshold(dstar[i], lambda);
        s.z[i] = s.theta[i] != 0.0 ? 1 : 0;
    }

    const int J = log2_exact(input_.n);
    s.eps.resize(J - input_.J0);
    for (int j = input_.J0; j < J; ++j) {
        const auto [b, e] = input_.level_range(j);
        double ones = 0;
        for (int i = b; i < e; ++i) ones += s.z[i];
        s.eps[j - input_.J0] = std::clamp(ones / (e - b), 0.05, 0.95);
    }
    return s;
}

Eigen::VectorXd GibbsSampler::residual(const GibbsState& s) const {
    if (input_.p == 0) return input_.d_detail - s.theta;
    return input_.d_detail - input_.U_detail * s.beta - s.theta;
}

Eigen::VectorXd GibbsSampler::d_star(const GibbsState& s) const {
    if (input_.p == 0) return input_.d_detail;
    return input_.d_detail - input_.U_detail * s.beta;
}

void GibbsSampler::update_gamma_beta(Rng& rng, GibbsState& s) const {
    Eigen::VectorXd Z = residual(s);
    const double log_prior_odds0 = std::log1p(-s.q) - std::log(s.q);
    for (int i = 0; i < input_.p; ++i) {
        const auto Ui = input_.U_detail.col(i);
        if (s.gamma[i]) Z += Ui * s.beta[i];  // Z with γ_i forced to 0

        const double ve = s.v[i] * s.eta2;
        const double denom = ve * col_norms_[i] + s.sigma2;
        const double zu = Z.dot(Ui);
        // f(γ=0)/f(γ=1) in log form; the shared normal factor cancels
        const double log_lr0 =
            0.5 * std::log(denom / s.sigma2) - ve * zu * zu / (2.0 * s.sigma2 * denom);
        const double prob1 = sigmoid_neg(log_prior_odds0 + log_lr0);

        if (rng.bernoulli(prob1)) {
            s.gamma[i] = 1;
            const double mean = ve * zu / denom;
            const double sd = std::sqrt(ve * s.sigma2 / denom);
            s.beta[i] = rng.normal(mean, sd);
            Z -= Ui * s.beta[i];
        } else {
            s.gamma[i] = 0;
            s.beta[i] = 0.0;
        }
    }
}

void GibbsSampler::update_v(Rng& rng, GibbsState& s) const {
    for (int i = 0; i < input_.p; ++i) {
        if (s.gamma[i] == 0) {
            s.v[i] = rng.exponential(1.0);
        } else {
            const double b = std::max(s.beta[i] * s.beta[i] / s.eta2, 1e-12);
            s.v[i] = sample_gig_half(rng, 2.0, b);
        }
    }
}

void GibbsSampler::update_eta2(Rng& rng, GibbsState& s) const {
    double active = 0.0, ss = 0.0;
    for (int i = 0; i < input_.p; ++i) {
        if (s.gamma[i]) {
            active += 1.0;
            ss += s.beta[i] * s.beta[i] / s.v[i];
        }
    }
    const double shape = hyper_.a2 + 0.5 * active;
    const double scale = 1.0 / (1.0 / hyper_.b2 + 0.5 * ss);
    s.eta2 = rng.inv_gamma(shape, scale);
}

void GibbsSampler::update_q(Rng& rng, GibbsState& s) const {
    double ones = 0.0;
    for (int i = 0; i < input_.p; ++i) ones += s.gamma[i];
    s.q = rng.beta(1.0 + ones, 1.0 + input_.p - ones);
}

void GibbsSampler::update_sigma2(Rng& rng, GibbsState& s) const {
    const double ssr = residual(s).squaredNorm();
    const double shape = hyper_.a1 + 0.5 * input_.n_detail();
    const double scale = 1.0 / (1.0 / hyper_.b1 + 0.5 * ssr);
    s.sigma2 = rng.inv_gamma(shape, scale);
}

void GibbsSampler::update_z(Rng& rng, GibbsState& s) const {
    const Eigen::VectorXd dstar = d_star(s);
    for (int i = 0; i < input_.n_detail(); ++i) {
        const double pj = posterior_weight({dstar[i], s.sigma2, s.tau_theta},
                                           s.eps[input_.level_of[i] - input_.J0]);
        s.z[i] = rng.bernoulli(pj) ? 1 : 0;
    }
}

void GibbsSampler::update_eps(Rng& rng, GibbsState& s) const {
    const int J = log2_exact(input_.n);
    for (int j = input_.J0; j < J; ++j) {
        const auto [b, e] = input_.level_range(j);
        double ones = 0.0;
        for (int i = b; i < e; ++i) ones += s.z[i];
        s.eps[j - input_.J0] = rng.beta(1.0 + ones, 1.0 + (e - b) - ones);
    }
}

void GibbsSampler::update_theta(Rng& rng, GibbsState& s) const {
    const Eigen::VectorXd dstar = d_star(s);
    for (int i = 0; i < input_.n_detail(); ++i) {
        if (s.z[i] == 0) {
            s.theta[i] = 0.0;
        } else {
            s.theta[i] = sample_post_theta(rng, {dstar[i], s.sigma2, s.tau_theta});
        }
    }
}

void GibbsSampler::update_tau_theta(Rng& rng, GibbsState& s) const {
    double count = 0.0, abs_sum = 0.0;
    for (int i = 0; i < input_.n_detail(); ++i) {
        if (s.z[i]) {
            count += 1.0;
            abs_sum += std::abs(s.theta[i]);
        }
    }
    const double shape = hyper_.a3 + count;
    const double scale = 1.0 / (1.0 / hyper_.b3 + abs_sum);
    s.tau_theta = rng.gamma(shape, scale);
}

void GibbsSampler::step(Rng& rng, GibbsState& s) const {
    update_gamma_beta(rng, s);
    update_v(rng, s);
    update_eta2(rng, s);
    update_q(rng, s);
    update_sigma2(rng, s);
    update_z(rng, s);
    update_eps(rng, s);
    update_theta(rng, s);
    update_tau_theta(rng, s);
}

ChainOutput run_chain(const ModelInput& input, const Hyperparameters& hyper) {
    GibbsSampler sampler(input, hyper);
    Rng rng(hyper.seed);
    GibbsState s = sampler.initial_state();

    const int kept = hyper.n_iter - hyper.burn_in;
    const int p = input.p;
    const int nd = input.n_detail();

    ChainOutput out;
    out.kept = kept;
    out.seed = hyper.seed;
    out.n_iter = hyper.n_iter;
    out.burn_in = hyper.burn_in;
    out.beta_draws.resize(kept, p);
    out.sigma2_trace.reserve(kept);
    out.q_trace.reserve(kept);
    out.eta2_trace.reserve(kept);
    out.tau_theta_trace.reserve(kept);

    Eigen::VectorXd theta_sum = Eigen::VectorXd::Zero(nd);
    Eigen::VectorXd gamma_sum = Eigen::VectorXd::Zero(p);

    for (int l = 1; l <= hyper.n_iter; ++l) {
        sampler.step(rng, s);
        if (l <= hyper.burn_in) continue;
        const int r = l - hyper.burn_in - 1;
        out.beta_draws.row(r) = s.beta;
        theta_sum += s.theta;
        for (int i = 0; i < p; ++i) gamma_sum[i] += s.gamma[i];
        out.sigma2_trace.push_back(s.sigma2);
        out.q_trace.push_back(s.q);
        out.eta2_trace.push_back(s.eta2);
        out.tau_theta_trace.push_back(s.tau_theta);

        std::vector<std::uint8_t> pattern(s.gamma.begin(), s.gamma.end());
        auto [it, inserted] = out.pattern_counts.try_emplace(std::move(pattern), 0L,
                                                             static_cast<long>(r));
        it->second.first += 1;
    }

    out.beta_hat = out.beta_draws.colwise().mean().transpose();
    out.beta_sd.resize(p);
    for (int i = 0; i < p; ++i) {
        const double m = out.beta_hat[i];
        out.beta_sd[i] =
            std::sqrt((out.beta_draws.col(i).array() - m).square().sum() / std::max(1, kept - 1));
    }
    out.inclusion_prob = gamma_sum / kept;
    out.theta_hat = theta_sum / kept;

    // reconstruction: detail block U β̂ + θ̂, scaling block pass-through
    Eigen::VectorXd dhat(input.n);
    dhat.head(1 << input.J0) = input.d_scaling;
    if (p > 0)
        dhat.tail(nd) = input.U_detail * out.beta_hat + out.theta_hat;
    else
        dhat.tail(nd) = out.theta_hat;
    std::vector<double> flat(dhat.data(), dhat.data() + input.n);
    const auto y = idwt(unflatten(flat, input.n, input.J0), input.filter);
    out.y_hat = Eigen::VectorXd::Map(y.data(), input.n);
    return out;
}

std::vector<std::pair<std::vector<std::uint8_t>, double>> select_models(const ChainOutput& chain,
                                                                        int K) {
    if (K < 1) throw std::invalid_argument("select_models: K must be >= 1");
    struct Entry {
        const std::vector<std::uint8_t>* pattern;
        long count;
        long first;
    };
    std::vector<Entry> entries;
    entries.reserve(chain.pattern_counts.size());
    for (const auto& [pat, cf] : chain.pattern_counts)
        entries.push_back({&pat, cf.first, cf.second});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.first < b.first;
    });
    std::vector<std::pair<std::vector<std::uint8_t>, double>> out;
    const int take = std::min<int>(K, static_cast<int>(entries.size()));
    out.reserve(take);
    for (int i = 0; i < take; ++i)
        out.emplace_back(*entries[i].pattern, static_cast<double>(entries[i].count) / chain.kept);
    return out;
}

}  // namespace wapalim
