#pragma once

#include "polygreen/geometry.h"

#include <functional>
#include <vector>

namespace polygreen {

struct GaussRule {
    std::vector<double> nodes;    // in (-1, 1), ascending
    std::vector<double> weights;
};

/// Gauss-Legendre rule with m nodes on [-1, 1] (Newton iteration on P_m).
GaussRule gauss_legendre(int m);

/// Integrates F over the shell {inner < |y| < outer} of R^n (inner may be 0,
/// giving the ball), for an integrand that is invariant under rotations
/// fixing the e_1 axis.
///
/// The coordinates are spherical and centered at the pole x = pole * e_1, so
/// a kernel singularity |x - y|^{2k-n} is cancelled by the radial Jacobian
/// rho^{n-1}. The polar angle is split at the cone tangent to the inner
/// sphere, and the hole-crossing part is reparametrised so that the ray/hole
/// intersection lengths are smooth in the angular variable.
class AxisymmetricShellQuadrature {
public:
    AxisymmetricShellQuadrature(int n, double inner, double outer, double pole);

    /// Fixed rule: `radial` Gauss nodes per ray segment, `angular` Gauss nodes
    /// per polar-angle segment.
    double integrate(const std::function<double(const Point&)>& f, int radial, int angular) const;

    struct Result {
        double value;
        double last_change;  // relative change at the final doubling
        int nodes;           // final node count per direction
        bool converged;
    };

    /// Doubles both node counts from `start` until the relative change is
    /// below `rel_tol` or `max_nodes` is exceeded.
    Result integrate_converged(const std::function<double(const Point&)>& f, double rel_tol = 1e-4,
                               int start = 16, int max_nodes = 256) const;

private:
    int n_;
    double inner_;
    double outer_;
    double pole_;
};

}  // namespace polygreen
