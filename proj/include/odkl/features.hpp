#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace odkl::features {

// Shared random-feature basis for the Gaussian kernel
// k(x, x') = exp(-||x - x'||^2 / (2 sigma^2)). Frequencies are drawn from the
// kernel's spectral density N(0, sigma^-2 I). Immutable after construction;
// every agent must be handed the same basis (same seed).
struct RFBasis {
    Eigen::MatrixXd omega; // L x d
    int l_count = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;

    int dim() const { return static_cast<int>(omega.cols()); }
};

RFBasis sample_basis(int l_count, int dim, double sigma, std::uint64_t seed);

// Maps x to the 2L-dimensional feature vector
//   sqrt(1/L) [cos(w_1'x), sin(w_1'x), ..., cos(w_L'x), sin(w_L'x)]
// (interleaved per frequency). The result always has unit 2-norm.
Eigen::VectorXd map(const RFBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x);

} // namespace odkl::features
