#include "polygreen/geometry.h"

#include "polygreen/errors.h"

#include <algorithm>
#include <numbers>
#include <string>

namespace polygreen {

ProblemSpec::ProblemSpec(int n, int k) : n_(n), k_(k) {
    if (k < 1 || n <= 2 * k)
        throw PreconditionError("ProblemSpec requires n > 2k >= 2, got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k));
}

Point Point::unit(int dim, int axis, double scale) {
    Point p(dim);
    p[axis] = scale;
    return p;
}

double Point::norm2() const noexcept {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return s;
}

namespace {
void check_same_dim(const Point& a, const Point& b) {
    if (a.dim() != b.dim())
        throw DomainError("point dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
}
}  // namespace

Point& Point::operator+=(const Point& o) {
    check_same_dim(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Point& Point::operator-=(const Point& o) {
    check_same_dim(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Point& Point::operator*=(double s) noexcept {
    for (double& v : c_) v *= s;
    return *this;
}

double dot(const Point& a, const Point& b) {
    check_same_dim(a, b);
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

double distance(const Point& a, const Point& b) {
    check_same_dim(a, b);
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void require_dimension(const Point& x, const ProblemSpec& spec) {
    if (x.dim() != spec.n())
        throw DomainError("point has dimension " + std::to_string(x.dim()) + ", expected n=" +
                          std::to_string(spec.n()));
}

BallDomain::BallDomain(Point center, double radius) : center_(std::move(center)), radius_(radius) {
    if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
}

BallDomain BallDomain::centered(int n, double radius) { return BallDomain(Point(n), radius); }

bool BallDomain::contains(const Point& x) const { return distance(x, center_) < radius_; }

double BallDomain::distance_to_boundary(const Point& x) const {
    return radius_ - distance(x, center_);
}

AnnulusDomain::AnnulusDomain(double inner, double outer) : inner_(inner), outer_(outer) {
    if (!(inner > 0.0) || !(inner < outer))
        throw PreconditionError("annulus requires 0 < a < b");
}

bool AnnulusDomain::contains(const Point& x) const {
    const double r = x.norm();
    return r > inner_ && r < outer_;
}

double AnnulusDomain::distance_to_boundary(const Point& x) const {
    const double r = x.norm();
    return std::min(r - inner_, outer_ - r);
}

Point invert(const Point& x) {
    const double r2 = x.norm2();
    if (!(std::sqrt(r2) >= kPoleGuard)) throw DomainError("inversion evaluated at the pole x = 0");
    return x * (1.0 / r2);
}

double conformal_factor(const Point& x, const ProblemSpec& spec) {
    require_dimension(x, spec);
    const double r = x.norm();
    if (!(r >= kPoleGuard)) throw DomainError("conformal factor evaluated at the pole x = 0");
    return std::pow(r, spec.green_exponent());
}

std::pair<double, double> mobius_distance_check(const Point& x, const Point& y) {
    const double d = distance(x, y);
    if (d == 0.0) throw SingularityError("mobius_distance_check requires x != y");
    const double lhs = distance(invert(x), invert(y));
    const double rhs = d / (x.norm() * y.norm());
    return {lhs, rhs};
}

double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

}  // namespace polygreen
