#include <doctest.h>

#include <cmath>
#include <random>

#include "wapalim/wavelet.hpp"

using namespace wapalim;

namespace {

std::vector<double> random_signal(int n, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    std::vector<double> x(n);
    for (auto& v : x) v = nd(gen);
    return x;
}

const char* kFilters[] = {"haar", "db4", "db6", "db8", "db10", "sym8"};

}  // namespace

TEST_CASE("filter bank invariants") {
    const double sqrt2 = std::sqrt(2.0);
    for (const char* name : kFilters) {
        CAPTURE(name);
        const auto fb = build_filter(name);
        double sum = 0.0, sumsq = 0.0;
        for (double h : fb.low_pass) {
            sum += h;
            sumsq += h * h;
        }
        CHECK(std::abs(sum - sqrt2) < 1e-12);
        CHECK(std::abs(sumsq - 1.0) < 1e-12);
        const int L = static_cast<int>(fb.low_pass.size());
        for (int m = 1; 2 * m < L; ++m) {
            double dot = 0.0;
            for (int k = 0; k + 2 * m < L; ++k) dot += fb.low_pass[k] * fb.low_pass[k + 2 * m];
            CHECK(std::abs(dot) < 1e-12);
        }
        // quadrature-mirror relation
        for (int k = 0; k < L; ++k)
            CHECK(fb.high_pass[k] == ((k % 2) ? -1.0 : 1.0) * fb.low_pass[L - 1 - k]);
    }
}

TEST_CASE("haar filter is the normalized pair") {
    const auto fb = build_filter(WaveletFamily::Haar);
    REQUIRE(fb.low_pass.size() == 2);
    CHECK(fb.low_pass[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(fb.low_pass[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("unsupported filter orders are rejected") {
    CHECK_THROWS_AS(build_filter(WaveletFamily::Daubechies, 7), std::invalid_argument);
    CHECK_THROWS_AS(build_filter(WaveletFamily::Daubechies, 12), std::invalid_argument);
    CHECK_THROWS_AS(build_filter(WaveletFamily::Symmlet, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_filter("nope"), std::invalid_argument);
}

TEST_CASE("dwt input validation") {
    const auto fb = build_filter("haar");
    CHECK_THROWS_AS(dwt(std::vector<double>(100, 0.0), fb, 2), std::invalid_argument);
    CHECK_THROWS_AS(dwt(std::vector<double>(64, 0.0), fb, 6), std::invalid_argument);
    CHECK_THROWS_AS(dwt(std::vector<double>(64, 0.0), fb, -1), std::invalid_argument);
}

TEST_CASE("zero signal maps to zero coefficients") {
    const auto c = dwt(std::vector<double>(64, 0.0), build_filter("db6"), 2);
    for (double v : c.scaling) CHECK(v == 0.0);
    for (double v : c.details) CHECK(v == 0.0);
}

TEST_CASE("constant signal under haar") {
    const int n = 128, J0 = 3;
    const double cval = 2.5;
    const auto c = dwt(std::vector<double>(n, cval), build_filter("haar"), J0);
    for (double v : c.details) CHECK(std::abs(v) < 1e-12);
    const double expect = cval * std::pow(2.0, (log2_exact(n) - J0) / 2.0);
    for (double v : c.scaling) CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("round trip and Parseval") {
    std::mt19937_64 gen(7);
    for (const char* name : kFilters) {
        const auto fb = build_filter(name);
        for (int n : {64, 128, 256, 512}) {
            for (int rep = 0; rep < 10; ++rep) {
                const auto x = random_signal(n, gen);
                const auto c = dwt(x, fb, 3);
                const auto back = idwt(c, fb);
                double err = 0.0, ex = 0.0, ec = 0.0;
                for (int i = 0; i < n; ++i) {
                    err = std::max(err, std::abs(back[i] - x[i]));
                    ex += x[i] * x[i];
                }
                for (double v : c.scaling) ec += v * v;
                for (double v : c.details) ec += v * v;
                CAPTURE(name);
                CHECK(err < 1e-10);
                CHECK(std::abs(ec - ex) < 1e-9 * ex);
            }
        }
    }
}

TEST_CASE("linearity") {
    std::mt19937_64 gen(11);
    const auto fb = build_filter("sym8");
    const auto x = random_signal(256, gen);
    const auto y = random_signal(256, gen);
    const double a = 1.7, b = -0.3;
    std::vector<double> comb(256);
    for (int i = 0; i < 256; ++i) comb[i] = a * x[i] + b * y[i];
    const auto cx = flatten(dwt(x, fb, 3));
    const auto cy = flatten(dwt(y, fb, 3));
    const auto cc = flatten(dwt(comb, fb, 3));
    for (int i = 0; i < 256; ++i) CHECK(std::abs(cc[i] - (a * cx[i] + b * cy[i])) < 1e-10);
}

TEST_CASE("single unit detail inverts to a unit-norm basis vector") {
    const auto fb = build_filter("db8");
    CoefficientSet c;
    c.n = 128;
    c.J0 = 3;
    c.scaling.assign(8, 0.0);
    c.details.assign(120, 0.0);
    c.detail(4, 5) = 1.0;
    const auto psi = idwt(c, fb);
    double norm = 0.0;
    for (double v : psi) norm += v * v;
    CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-10);
    // forward transform recovers the unit coefficient
    const auto c2 = dwt(psi, fb, 3);
    CHECK(c2.detail(4, 5) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("idwt rejects malformed coefficient sets") {
    CoefficientSet c;
    c.n = 64;
    c.J0 = 2;
    c.scaling.assign(4, 0.0);
    c.details.assign(10, 0.0);  // should be 60
    CHECK_THROWS_AS(idwt(c, build_filter("haar")), std::invalid_argument);
}

TEST_CASE("coefficient set indexing") {
    std::mt19937_64 gen(3);
    const auto c = dwt(random_signal(64, gen), build_filter("haar"), 2);
    CHECK(c.num_levels() == 4);
    CHECK(c.level_range(2) == std::pair<int, int>{0, 4});
    CHECK(c.level_range(5) == std::pair<int, int>{28, 60});
    CHECK(c.level_of(0) == 2);
    CHECK(c.level_of(27) == 4);
    CHECK(c.level_of(59) == 5);
    CHECK(static_cast<int>(c.details.size()) == 64 - 4);
}

TEST_CASE("transform_design") {
    std::mt19937_64 gen(21);
    std::normal_distribution<double> nd;
    const int n = 256, p = 5;
    const auto fb = build_filter("db6");

    SUBCASE("zero matrix") {
        const Eigen::MatrixXd U = transform_design(Eigen::MatrixXd::Zero(n, p), fb, 3);
        CHECK(U.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("constant column has zero detail rows") {
        Eigen::MatrixXd X = Eigen::MatrixXd::Constant(n, 1, 4.0);
        const Eigen::MatrixXd U = transform_design(X, fb, 3);
        CHECK(U.col(0).tail(n - 8).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("gram matrix is preserved") {
        Eigen::MatrixXd X(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) X(i, j) = nd(gen);
        const Eigen::MatrixXd U = transform_design(X, fb, 3);
        const double err =
            (U.transpose() * U - X.transpose() * X).cwiseAbs().maxCoeff();
        CHECK(err < 1e-8);
    }

    SUBCASE("row count must be a power of two") {
        CHECK_THROWS_AS(transform_design(Eigen::MatrixXd::Zero(100, 2), fb, 3),
                        std::invalid_argument);
    }
}

TEST_CASE("flatten round trip") {
    std::mt19937_64 gen(5);
    const auto c = dwt(random_signal(128, gen), build_filter("sym8"), 3);
    const auto flat = flatten(c);
    REQUIRE(flat.size() == 128);
    const auto c2 = unflatten(flat, 128, 3);
    CHECK(c2.scaling == c.scaling);
    CHECK(c2.details == c.details);
    CHECK_THROWS_AS(unflatten(flat, 256, 3), std::invalid_argument);
}
