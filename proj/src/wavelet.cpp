#include "wapalim/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace wapalim {

namespace {

// Coefficients from the spectral factorization of the Daubechies polynomial,
// computed with 60-digit arithmetic and rounded to double. Daubechies filters
// use the extremal-phase root selection, Symmlet the least-asymmetric one.
const std::vector<double> kHaar = {
    7.0710678118654752440e-01, 7.0710678118654752440e-01};

const std::vector<double> kDb4 = {
    4.8296291314453415611e-01, 8.3651630373780794248e-01,
    2.2414386804201338887e-01, -1.2940952255126036974e-01};

const std::vector<double> kDb6 = {
    3.3267055295008263194e-01, 8.0689150931109254738e-01,
    4.5987750211849154347e-01, -1.3501102001025458432e-01,
    -8.5441273882026658182e-02, 3.5226291885709533347e-02};

const std::vector<double> kDb8 = {
    2.3037781330889650633e-01, 7.1484657055291567218e-01,
    6.3088076792985892105e-01, -2.7983769416859854279e-02,
    -1.8703481171909308589e-01, 3.0841381835560763985e-02,
    3.2883011666885196556e-02, -1.0597401785069031702e-02};

const std::vector<double> kDb10 = {
    1.6010239797419292818e-01, 6.0382926979718964944e-01,
    7.2430852843777293604e-01, 1.3842814590132074271e-01,
    -2.4229488706638202533e-01, -3.2244869584638374827e-02,
    7.7571493840045718793e-02, -6.2414902127982743729e-03,
    -1.2580751999081998815e-02, 3.3357252854737712462e-03};

const std::vector<double> kSym8 = {
    1.8899503327676891052e-03, -3.0292051472413308736e-04,
    -1.4952258337062198854e-02, 3.8087520138944896096e-03,
    4.9137179673730289886e-02, -2.7219029917103485655e-02,
    -5.1945838107881801837e-02, 3.6444189483617894787e-01,
    7.7718575169962800242e-01, 4.8135965125905338935e-01,
    -6.1273359067811075662e-02, -1.4329423835127266806e-01,
    7.6074873249766085739e-03, 3.1695087811525989030e-02,
    -5.4213233180001071769e-04, -3.3824159510050027730e-03};

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
    const int L = static_cast<int>(h.size());
    std::vector<double> g(L);
    for (int k = 0; k < L; ++k) {
        g[k] = ((k % 2) == 0 ? 1.0 : -1.0) * h[L - 1 - k];
    }
    return g;
}

}  // namespace

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
    int j = 0;
    while ((1 << j) < n) ++j;
    return j;
}

std::string FilterBank::name() const {
    switch (family) {
        case WaveletFamily::Haar: return "haar";
        case WaveletFamily::Daubechies: return "db" + std::to_string(order);
        case WaveletFamily::Symmlet: return "sym" + std::to_string(order);
    }
    return "?";
}

FilterBank build_filter(WaveletFamily family, int order) {
    FilterBank fb;
    fb.family = family;
    fb.order = order;
    switch (family) {
        case WaveletFamily::Haar:
            fb.order = 2;
            fb.low_pass = kHaar;
            break;
        case WaveletFamily::Daubechies:
            if (order == 4) fb.low_pass = kDb4;
            else if (order == 6) fb.low_pass = kDb6;
            else if (order == 8) fb.low_pass = kDb8;
            else if (order == 10) fb.low_pass = kDb10;
            else
                throw std::invalid_argument(
                    "unsupported order for Daubechies filter: " + std::to_string(order) +
                    " (supported: 4, 6, 8, 10)");
            break;
        case WaveletFamily::Symmlet:
            if (order == 8) fb.low_pass = kSym8;
            else
                throw std::invalid_argument(
                    "unsupported order for Symmlet filter: " + std::to_string(order) +
                    " (supported: 8)");
            break;
    }
    fb.high_pass = quadrature_mirror(fb.low_pass);
    return fb;
}

FilterBank build_filter(const std::string& name) {
    if (name == "haar") return build_filter(WaveletFamily::Haar);
    if (name.rfind("db", 0) == 0)
        return build_filter(WaveletFamily::Daubechies, std::stoi(name.substr(2)));
    if (name.rfind("sym", 0) == 0)
        return build_filter(WaveletFamily::Symmlet, std::stoi(name.substr(3)));
    throw std::invalid_argument("unknown wavelet filter name: " + name);
}

int CoefficientSet::num_levels() const { return log2_exact(n) - J0; }

std::pair<int, int> CoefficientSet::level_range(int j) const {
    // levels J0..J-1 are laid out contiguously, level j holds 2^j values
    const int begin = (1 << j) - (1 << J0);
    return {begin, begin + (1 << j)};
}

int CoefficientSet::level_of(int detail_index) const {
    int j = J0;
    int offset = 0;
    while (detail_index >= offset + (1 << j)) {
        offset += (1 << j);
        ++j;
    }
    return j;
}

double& CoefficientSet::detail(int j, int k) { return details[level_range(j).first + k]; }
double CoefficientSet::detail(int j, int k) const { return details[level_range(j).first + k]; }

CoefficientSet dwt(const std::vector<double>& signal, const FilterBank& filter, int J0) {
    const int n = static_cast<int>(signal.size());
    if (!is_power_of_two(n))
        throw std::invalid_argument("dwt: signal length must be a power of two, got " +
                                    std::to_string(n));
    const int J = log2_exact(n);
    if (J0 < 0 || J0 >= J)
        throw std::invalid_argument("dwt: coarsest level J0 out of range [0, " +
                                    std::to_string(J - 1) + "]");

    CoefficientSet out;
    out.n = n;
    out.J0 = J0;
    out.details.resize(n - (1 << J0));

    const auto& h = filter.low_pass;
    const auto& g = filter.high_pass;
    const int L = static_cast<int>(h.size());

    std::vector<double> approx = signal;
    std::vector<double> next;
    for (int j = J - 1; j >= J0; --j) {
        const int len = 1 << (j + 1);  // current approximation length
        const int half = len >> 1;
        next.assign(half, 0.0);
        const auto range = out.level_range(j);
        for (int k = 0; k < half; ++k) {
            double a = 0.0, d = 0.0;
            for (int m = 0; m < L; ++m) {
                const double x = approx[(2 * k + m) & (len - 1)];
                a += h[m] * x;
                d += g[m] * x;
            }
            next[k] = a;
            out.details[range.first + k] = d;
        }
        approx.swap(next);
    }
    out.scaling = std::move(approx);
    return out;
}

std::vector<double> idwt(const CoefficientSet& coeffs, const FilterBank& filter) {
    const int n = coeffs.n;
    if (!is_power_of_two(n) ||
        static_cast<int>(coeffs.scaling.size()) != (1 << coeffs.J0) ||
        static_cast<int>(coeffs.details.size()) != n - (1 << coeffs.J0))
        throw std::invalid_argument("idwt: malformed coefficient set");
    const int J = log2_exact(n);

    const auto& h = filter.low_pass;
    const auto& g = filter.high_pass;
    const int L = static_cast<int>(h.size());

    std::vector<double> approx = coeffs.scaling;
    std::vector<double> next;
    for (int j = coeffs.J0; j < J; ++j) {
        const int half = 1 << j;
        const int len = half << 1;
        next.assign(len, 0.0);
        const auto range = coeffs.level_range(j);
        for (int k = 0; k < half; ++k) {
            const double a = approx[k];
            const double d = coeffs.details[range.first + k];
            for (int m = 0; m < L; ++m) {
                next[(2 * k + m) & (len - 1)] += h[m] * a + g[m] * d;
            }
        }
        approx.swap(next);
    }
    return approx;
}

std::vector<double> flatten(const CoefficientSet& coeffs) {
    std::vector<double> out;
    out.reserve(coeffs.n);
    out.insert(out.end(), coeffs.scaling.begin(), coeffs.scaling.end());
    out.insert(out.end(), coeffs.details.begin(), coeffs.details.end());
    return out;
}

CoefficientSet unflatten(const std::vector<double>& values, int n, int J0) {
    if (static_cast<int>(values.size()) != n)
        throw std::invalid_argument("unflatten: length mismatch");
    CoefficientSet out;
    out.n = n;
    out.J0 = J0;
    out.scaling.assign(values.begin(), values.begin() + (1 << J0));
    out.details.assign(values.begin() + (1 << J0), values.end());
    return out;
}

Eigen::MatrixXd transform_design(const Eigen::MatrixXd& X, const FilterBank& filter, int J0) {
    const int n = static_cast<int>(X.rows());
    if (!is_power_of_two(n))
        throw std::invalid_argument("transform_design: number of rows must be a power of two");
    Eigen::MatrixXd U(n, X.cols());
    std::vector<double> col(n);
    for (int i = 0; i < X.cols(); ++i) {
        Eigen::VectorXd::Map(col.data(), n) = X.col(i);
        const auto flat = flatten(dwt(col, filter, J0));
        U.col(i) = Eigen::VectorXd::Map(flat.data(), n);
    }
    return U;
}

}  // namespace wapalim
