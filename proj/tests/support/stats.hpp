#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace testsupport {

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / x.size();
}

inline double sd(const std::vector<double>& x) {
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / (x.size() - 1));
}

inline double standard_error(const std::vector<double>& x) {
    return sd(x) / std::sqrt(static_cast<double>(x.size()));
}

// batch-means standard error for autocorrelated chains
inline double batch_se(const std::vector<double>& x, int batches = 25) {
    const int len = static_cast<int>(x.size()) / batches;
    std::vector<double> bm;
    for (int b = 0; b < batches; ++b) {
        double s = 0.0;
        for (int i = 0; i < len; ++i) s += x[b * len + i];
        bm.push_back(s / len);
    }
    return sd(bm) / std::sqrt(static_cast<double>(batches));
}

// two-sample Kolmogorov-Smirnov p-value (asymptotic)
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace testsupport
