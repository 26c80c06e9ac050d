#pragma once

#include <cstddef>
#include <vector>

namespace boundkde {

//! Nodes and weights of a one-dimensional quadrature rule.
struct Rule1d
{
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

//! Gauss-Legendre rule with `n` nodes on [-1, 1], nodes ascending.
//! Exact for polynomials of degree 2n - 1.
Rule1d gauss_legendre(std::size_t n);

//! Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of
//! `nodes_per_panel` nodes each.
Rule1d composite_gauss_legendre(double a,
                                double b,
                                std::size_t panels,
                                std::size_t nodes_per_panel);

//! Composite rule over consecutive break points (each sub-interval gets one
//! Gauss panel). Break points must be ascending.
Rule1d piecewise_gauss_legendre(const std::vector<double>& breaks,
                                std::size_t nodes_per_panel);

} // namespace boundkde
