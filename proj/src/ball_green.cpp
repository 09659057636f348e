#include "polygreen/ball_green.h"

#include "polygreen/errors.h"
#include "polygreen/quadrature.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace polygreen {

namespace {

double binomial(int m, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (m - j + i) / i;
    return c;
}

// Below this z the closed form loses digits to cancellation.
constexpr double kProfileSwitch = 2.0;

const GaussRule& profile_rule() {
    static const GaussRule rule = gauss_legendre(32);
    return rule;
}

}  // namespace

double fundamental_constant(const ProblemSpec& spec) {
    const int n = spec.n();
    double c = 1.0 / ((n - 2) * n * unit_ball_volume(n));
    for (int j = 2; j <= spec.k(); ++j) c /= (2.0 * j - 2.0) * (n - 2.0 * j);
    return c;
}

double fundamental_solution(const Point& x, const Point& y, const ProblemSpec& spec) {
    const double d = distance(x, y);
    if (d == 0.0) throw SingularityError("fundamental solution evaluated on the diagonal");
    return fundamental_constant(spec) * std::pow(d, spec.green_exponent());
}

double boggio_auxiliary(const Point& x, const Point& y) {
    const double x2 = x.norm2(), y2 = y.norm2();
    constexpr double slack = 1e-12;
    if (x2 > 1.0 + slack || y2 > 1.0 + slack) throw DomainError("boggio_auxiliary: point outside the closed unit ball");
    const double d = distance(x, y);
    if (d == 0.0) throw SingularityError("boggio_auxiliary: x == y");
    // |x|^2|y|^2 - 2x.y + 1 = |x-y|^2 + (1-|x|^2)(1-|y|^2), which stays accurate near the sphere
    const double num2 = d * d + (1.0 - x2) * (1.0 - y2);
    return std::max(1.0, std::sqrt(std::max(num2, 0.0)) / d);
}

double boggio_profile(double z, const ProblemSpec& spec) {
    if (!(z >= 1.0)) throw DomainError("boggio_profile requires z >= 1");
    const int n = spec.n(), k = spec.k();
    if (z == 1.0) return 0.0;
    if (z < kProfileSwitch) {
        const GaussRule& rule = profile_rule();
        const double half = 0.5 * (z - 1.0), mid = 0.5 * (z + 1.0);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double v = mid + half * rule.nodes[i];
            s += rule.weights[i] * std::pow(v * v - 1.0, k - 1) * std::pow(v, 1 - n);
        }
        return s * half;
    }
    double s = 0.0;
    for (int j = 0; j <= k - 1; ++j) {
        const int e = 2 * j + 2 - n;  // e <= 2k - n < 0
        const double sign = ((k - 1 - j) % 2) ? -1.0 : 1.0;
        s += sign * binomial(k - 1, j) * (std::pow(z, e) - 1.0) / e;
    }
    return s;
}

double boggio_profile_limit(const ProblemSpec& spec) {
    const int n = spec.n(), k = spec.k();
    double s = 0.0;
    for (int j = 0; j <= k - 1; ++j) {
        const double sign = ((k - 1 - j) % 2) ? -1.0 : 1.0;
        s += sign * binomial(k - 1, j) / (n - 2.0 - 2.0 * j);
    }
    return s;
}

BoggioKernel::BoggioKernel(ProblemSpec spec, BallDomain ball)
    : spec_(spec), ball_(std::move(ball)),
      normalization_(fundamental_constant(spec) / boggio_profile_limit(spec)) {
    require_dimension(ball_.center(), spec_);
}

double BoggioKernel::operator()(const Point& x, const Point& y) const {
    require_dimension(x, spec_);
    require_dimension(y, spec_);
    const double R = ball_.radius();
    const Point xs = (x - ball_.center()) * (1.0 / R);
    const Point ys = (y - ball_.center()) * (1.0 / R);
    const double A = boggio_auxiliary(xs, ys);
    const double d = distance(xs, ys);
    const double unit = normalization_ * std::pow(d, spec_.green_exponent()) * boggio_profile(A, spec_);
    return std::pow(R, spec_.green_exponent()) * unit;
}

double ball_green(const Point& x, const Point& y, const BoggioKernel& kernel) { return kernel(x, y); }

}  // namespace polygreen
