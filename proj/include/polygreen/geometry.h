#pragma once

#include <cmath>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace polygreen {

/// Dimension n and half-order k of (-Delta)^k. Requires n > 2k >= 2.
class ProblemSpec {
public:
    ProblemSpec(int n, int k);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    /// 2k - n, the homogeneity degree of the fundamental solution.
    int green_exponent() const noexcept { return 2 * k_ - n_; }

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

private:
    int n_;
    int k_;
};

/// A point of R^n. Arithmetic between points of different length throws.
class Point {
public:
    Point() = default;
    explicit Point(int dim) : c_(static_cast<std::size_t>(dim), 0.0) {}
    explicit Point(std::vector<double> coords) : c_(std::move(coords)) {}
    Point(std::initializer_list<double> coords) : c_(coords) {}

    static Point unit(int dim, int axis, double scale = 1.0);

    int dim() const noexcept { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    std::span<const double> coords() const noexcept { return c_; }

    double norm2() const noexcept;
    double norm() const noexcept { return std::sqrt(norm2()); }

    Point& operator+=(const Point& o);
    Point& operator-=(const Point& o);
    Point& operator*=(double s) noexcept;

    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(Point a, double s) { return a *= s; }
    friend Point operator*(double s, Point a) { return a *= s; }
    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> c_;
};

double dot(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);

/// Throws DomainError when x.dim() != spec.n().
void require_dimension(const Point& x, const ProblemSpec& spec);

class BallDomain {
public:
    BallDomain(Point center, double radius);
    /// Ball of radius r centered at the origin of R^n.
    static BallDomain centered(int n, double radius = 1.0);

    const Point& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    bool contains(const Point& x) const;  // open ball
    double distance_to_boundary(const Point& x) const;

private:
    Point center_;
    double radius_;
};

/// Concentric annulus a < |y| < b centered at the origin.
class AnnulusDomain {
public:
    AnnulusDomain(double inner, double outer);

    double inner() const noexcept { return inner_; }
    double outer() const noexcept { return outer_; }
    bool contains(const Point& x) const;  // open annulus
    double distance_to_boundary(const Point& x) const;

private:
    double inner_;
    double outer_;
};

/// Points closer than this to the origin are treated as the pole of the
/// inversion.
inline constexpr double kPoleGuard = 1e-14;

/// x / |x|^2.
Point invert(const Point& x);

/// |x|^{2k-n}.
double conformal_factor(const Point& x, const ProblemSpec& spec);

/// Both sides of |inv(x) - inv(y)| = |x - y| / (|x| |y|).
std::pair<double, double> mobius_distance_check(const Point& x, const Point& y);

/// Volume of the unit ball of R^n.
double unit_ball_volume(int n);
/// Area of the unit sphere S^{n-1} = n * unit_ball_volume(n).
double unit_sphere_area(int n);

}  // namespace polygreen
