#pragma once

#include "polygreen/geometry.h"

#include <functional>
#include <vector>

namespace polygreen {

using ScalarField = std::function<double(const Point&)>;

/// All multi-indices alpha in N^n with |alpha| = order, in lexicographically
/// decreasing order (so (order,0,...,0) comes first).
std::vector<std::vector<int>> multi_indices(int n, int order);

/// Half-width of the tensor central-difference stencil for alpha, in units
/// of the step h.
double stencil_half_width(const std::vector<int>& alpha);

/// Mixed partial d^alpha f(y) by tensor-product central differences of
/// spacing h, with one Richardson level (h and h/2).
double partial_derivative(const ScalarField& f, const Point& y, const std::vector<int>& alpha, double h);

/// All order-r partials of f at y, ordered as multi_indices(n, r).
std::vector<double> derivative_tensor(const ScalarField& f, const Point& y, int order, double h);

/// Relative step used for order-r derivatives of a function evaluated to
/// about 1e-14 relative accuracy: max(base, 1e-14^{1/(r+4)}). The exponent
/// balances roundoff h^{-r} against the O(h^4) Richardson remainder.
double derivative_step_factor(int order, double base);

double max_abs(const std::vector<double>& v);

}  // namespace polygreen
