#ifndef XRWA_QUADRATURE_HPP
#define XRWA_QUADRATURE_HPP

#include <vector>

namespace xrwa {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// Nodes and weights of the n-point Gauss-Legendre rule (Newton on P_n).
const GaussLegendre& gauss_legendre(int n);

}  // namespace xrwa

#endif
