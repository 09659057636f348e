#include "polygreen/exterior_green.h"

#include "polygreen/errors.h"
#include "polygreen/finite_difference.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace polygreen {

InnerGreen unit_ball_inner(const ProblemSpec& spec) {
    BoggioKernel kernel(spec, BallDomain::centered(spec.n()));
    return InnerGreen{
        [kernel](const Point& x, const Point& y) { return kernel(x, y); },
        [](const Point& z) { return z.norm2() < 1.0; },
    };
}

ExteriorKernel::ExteriorKernel(ProblemSpec spec, double hole_scale, InnerGreen inner)
    : spec_(spec), eps_(hole_scale), inner_(std::move(inner)) {
    if (!(hole_scale > 0.0)) throw PreconditionError("hole scale must be positive");
    if (!inner_.green || !inner_.contains) throw PreconditionError("inner Green data incomplete");
}

ExteriorKernel ExteriorKernel::ball_hole(const ProblemSpec& spec, double hole_scale) {
    return ExteriorKernel(spec, hole_scale, unit_ball_inner(spec));
}

bool ExteriorKernel::admissible(const Point& x) const {
    if (x.norm() < kPoleGuard) return false;
    // x outside eps*closure(omega)  <=>  eps*inv(x) in omega_0
    return inner_.contains(invert(x) * eps_);
}

double ExteriorKernel::operator()(const Point& x, const Point& y) const {
    require_dimension(x, spec_);
    require_dimension(y, spec_);
    if (!admissible(x) || !admissible(y)) throw DomainError("exterior Green function evaluated inside the hole");
    if (x == y) throw SingularityError("exterior Green function on the diagonal");
    const int e = spec_.green_exponent();
    const double prefactor = std::pow(eps_, -e) * std::pow(x.norm(), e) * std::pow(y.norm(), e);
    return prefactor * inner_.green(invert(x) * eps_, invert(y) * eps_);
}

double exterior_green(const Point& x, const Point& y, const ExteriorKernel& kernel) { return kernel(x, y); }

namespace {

Point random_direction(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Point p(n);
    for (;;) {
        for (int i = 0; i < n; ++i) p[i] = g(rng);
        const double r = p.norm();
        if (r > 1e-8) return p * (1.0 / r);
    }
}

}  // namespace

SampleGrid exterior_sample_grid(const ProblemSpec& spec, double hole_scale, int level, unsigned long long seed) {
    const int n = spec.n();
    std::mt19937_64 rng(seed);
    const int directions = 4 << std::max(level, 0);
    const std::vector<double> radii = {1.05, 1.25, 1.6, 2.5, 4.0, 8.0};
    const std::vector<double> gaps = {1e-1, 1e-2, 1e-3};
    SampleGrid grid;
    for (int d = 0; d < directions; ++d) {
        const Point u = random_direction(n, rng);
        const Point v = random_direction(n, rng);
        for (double ry : radii) {
            const Point y = u * ry;
            for (double rx : radii) {
                const Point x = v * rx;
                if (distance(x, y) > 1e-6) grid.pairs.emplace_back(x * hole_scale, y * hole_scale);
            }
            // near-diagonal pairs, kept outside the hole
            for (double g : gaps) {
                const Point x = y + random_direction(n, rng) * (g * (ry - 1.0));
                grid.pairs.emplace_back(x * hole_scale, y * hole_scale);
            }
        }
    }
    return grid;
}

double exterior_derivative_bound_check(const ExteriorKernel& kernel, int order, const SampleGrid& samples) {
    const ProblemSpec& spec = kernel.spec();
    if (order < 0 || order > 2 * spec.k()) throw DomainError("derivative order must lie in [0, 2k]");
    const int e = spec.green_exponent();
    const double eps = kernel.hole_scale();
    double best = 0.0;
    for (const auto& [x, y] : samples.pairs) {
        const double dxy = distance(x, y);
        const double margin = y.norm() - eps;
        double value;
        if (order == 0) {
            value = std::abs(kernel(x, y));
        } else {
            const double h = derivative_step_factor(order, 1e-4) * std::min(dxy, margin);
            ScalarField g = [&](const Point& z) { return kernel(x, z); };
            value = max_abs(derivative_tensor(g, y, order, h));
        }
        double bound = 0.0;
        for (int r = 0; r <= order; ++r) bound += std::pow(x.norm(), r) * std::pow(dxy, e - r);
        bound *= std::pow(y.norm(), -order);
        best = std::max(best, value / bound);
    }
    return best;
}

}  // namespace polygreen
