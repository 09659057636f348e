#pragma once

#include "polygreen/ball_green.h"
#include "polygreen/geometry.h"

#include <functional>
#include <utility>
#include <vector>

namespace polygreen {

/// Green function of a bounded domain omega_0 containing 0, together with its
/// membership test. omega_0 is the inversion image of the exterior of the
/// hole shape omega, with 0 added back.
struct InnerGreen {
    std::function<double(const Point&, const Point&)> green;
    std::function<bool(const Point&)> contains;  // open omega_0
};

/// Inner data for a unit-ball hole: omega_0 is again the unit ball and its
/// Green function is Boggio's.
InnerGreen unit_ball_inner(const ProblemSpec& spec);

/// Green function of (-Delta)^k on R^n minus the closed hole eps * omega,
/// obtained by inverting the problem into omega_0:
///   G(x,y) = eps^{n-2k} |x|^{2k-n} |y|^{2k-n} G_0(eps inv(x), eps inv(y)).
class ExteriorKernel {
public:
    ExteriorKernel(ProblemSpec spec, double hole_scale, InnerGreen inner);
    /// Hole = closed ball of radius eps at the origin.
    static ExteriorKernel ball_hole(const ProblemSpec& spec, double hole_scale);

    const ProblemSpec& spec() const noexcept { return spec_; }
    double hole_scale() const noexcept { return eps_; }
    /// True when x lies outside the closed hole.
    bool admissible(const Point& x) const;

    double operator()(const Point& x, const Point& y) const;

private:
    ProblemSpec spec_;
    double eps_;
    InnerGreen inner_;
};

double exterior_green(const Point& x, const Point& y, const ExteriorKernel& kernel);

struct SampleGrid {
    std::vector<std::pair<Point, Point>> pairs;
};

/// Stratified sample pairs for the exterior of the hole eps * B_1, built in
/// units of eps (so grids for different eps are similar copies). `level`
/// controls the number of directions; refinement = level + 1.
SampleGrid exterior_sample_grid(const ProblemSpec& spec, double hole_scale, int level, unsigned long long seed);

/// Smallest C with |grad^i_y G(x,y)| <= C |y|^{-i} sum_{r<=i} |x|^r |x-y|^{2k-n-r}
/// over the grid, where |grad^i| is the largest order-i partial in absolute
/// value (finite differences with one Richardson level).
double exterior_derivative_bound_check(const ExteriorKernel& kernel, int order, const SampleGrid& samples);

}  // namespace polygreen
