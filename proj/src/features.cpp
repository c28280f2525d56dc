#include "odkl/features.hpp"

#include <cmath>
#include <string>

#include "odkl/errors.hpp"
#include "odkl/rng.hpp"

namespace odkl::features {

RFBasis sample_basis(int l_count, int dim, double sigma, std::uint64_t seed) {
    if (l_count < 1)
        throw Error("sample_basis: l_count must be >= 1");
    if (dim < 1)
        throw Error("sample_basis: dim must be >= 1");
    if (!(sigma > 0.0))
        throw Error("sample_basis: sigma must be > 0");
    RFBasis basis;
    basis.l_count = l_count;
    basis.sigma = sigma;
    basis.seed = seed;
    basis.omega.resize(l_count, dim);
    Rng rng(seed);
    for (int l = 0; l < l_count; ++l)
        for (int k = 0; k < dim; ++k)
            basis.omega(l, k) = rng.normal() / sigma;
    return basis;
}

Eigen::VectorXd map(const RFBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != basis.omega.cols())
        throw DimensionMismatch("features::map: x has dimension " + std::to_string(x.size()) +
                                ", basis expects " + std::to_string(basis.omega.cols()));
    const int l = basis.l_count;
    const double scale = std::sqrt(1.0 / static_cast<double>(l));
    Eigen::VectorXd proj = basis.omega * x;
    Eigen::VectorXd z(2 * l);
    for (int i = 0; i < l; ++i) {
        z(2 * i) = scale * std::cos(proj(i));
        z(2 * i + 1) = scale * std::sin(proj(i));
    }
    return z;
}

} // namespace odkl::features
