#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace wapalim {

enum class WaveletFamily { Haar, Daubechies, Symmlet };

// Orthonormal conjugate-mirror filter pair. The high-pass filter is derived
// from the low-pass one by g_k = (-1)^k h_{L-1-k}.
struct FilterBank {
    WaveletFamily family;
    int order;  // filter length for Daubechies, vanishing moments for Symmlet
    std::vector<double> low_pass;
    std::vector<double> high_pass;

    std::string name() const;
};

// Supported: Haar, Daubechies(4|6|8|10) where order = filter length,
// Symmlet(8) where order = number of vanishing moments (16 taps).
FilterBank build_filter(WaveletFamily family, int order = 0);

// Convenience lookup by the names used on the command line: "haar", "db4",
// "db6", "db8", "db10", "sym8".
FilterBank build_filter(const std::string& name);

// Periodic orthogonal wavelet decomposition of a length-n signal, n = 2^J.
// Detail coefficients are stored flattened coarse-to-fine: level J0 first,
// position k ascending within each level. This ordering is the contract
// shared with the flattened transform below.
struct CoefficientSet {
    int n = 0;   // 2^J
    int J0 = 0;  // coarsest level
    std::vector<double> scaling;  // 2^J0 values at level J0
    std::vector<double> details;  // 2^J - 2^J0 values, levels J0..J-1

    int num_levels() const;
    // [begin, end) index range of level j inside `details`
    std::pair<int, int> level_range(int j) const;
    int level_of(int detail_index) const;

    double& detail(int j, int k);
    double detail(int j, int k) const;
};

CoefficientSet dwt(const std::vector<double>& signal, const FilterBank& filter, int J0);
std::vector<double> idwt(const CoefficientSet& coeffs, const FilterBank& filter);

// Flattened layout used for vectors and design matrices alike:
// [scaling block (2^J0) | detail levels J0..J-1].
std::vector<double> flatten(const CoefficientSet& coeffs);
CoefficientSet unflatten(const std::vector<double>& values, int n, int J0);

// Column-wise DWT of the design matrix, rows in flattened order.
Eigen::MatrixXd transform_design(const Eigen::MatrixXd& X, const FilterBank& filter, int J0);

bool is_power_of_two(int n);
int log2_exact(int n);

}  // namespace wapalim
