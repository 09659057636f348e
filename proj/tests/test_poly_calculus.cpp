#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polygreen/poly.h"
#include "test_util.h"

#include <random>

using namespace polygreen;

namespace {

// Nested 7-point central differences of the Laplacian. Independent of
// Polynomial::derivative.
double fd_laplacian(const std::function<double(const Point&)>& f, const Point& y, double h) {
    double sum = 0.0;
    for (int i = 0; i < y.dim(); ++i) {
        const Point e = Point::unit(y.dim(), i, h);
        // fourth-order stencil: (-f(+2) + 16 f(+1) - 30 f(0) + 16 f(-1) - f(-2)) / 12 h^2
        sum += (-f(y + e * 2.0) + 16.0 * f(y + e) - 30.0 * f(y) + 16.0 * f(y - e) - f(y - e * 2.0)) / (12.0 * h * h);
    }
    return sum;
}

double fd_polyharmonic_step(const Polynomial& p, int k, const Point& y, double h) {
    std::function<double(const Point&)> f = [&p](const Point& z) { return p(z); };
    for (int j = 0; j < k; ++j) {
        std::function<double(const Point&)> g = f;
        f = [g, h](const Point& z) { return -fd_laplacian(g, z, h); };
    }
    return f(y);
}

// one Richardson level on top of the fourth-order stencil
double fd_polyharmonic(const Polynomial& p, int k, const Point& y) {
    const double h = 2e-2;
    return (16.0 * fd_polyharmonic_step(p, k, y, 0.5 * h) - fd_polyharmonic_step(p, k, y, h)) / 15.0;
}

Polynomial radial_poly(int n, double a, double b, int power) {
    const Polynomial r2 = Polynomial::norm_squared(n);
    return ((r2 - Polynomial::constant(n, a * a)) * (Polynomial::constant(n, b * b) - r2)).pow(power);
}

}  // namespace

TEST_CASE("laplacian examples") {
    for (int n : {3, 5, 7}) {
        const Polynomial r2 = Polynomial::norm_squared(n);
        CHECK(laplacian(r2) == Polynomial::constant(n, 2.0 * n));
        CHECK(laplacian(Polynomial::variable(n, 0) * Polynomial::variable(n, 1)).is_zero());
        CHECK(laplacian(r2 * r2) == r2 * (4.0 * (n + 2)));
    }
}

TEST_CASE("degree drops by two") {
    const int n = 4;
    const Polynomial p = (Polynomial::norm_squared(n) + Polynomial::variable(n, 2)).pow(3);
    CHECK(p.degree() == 6);
    CHECK(laplacian(p).degree() == 4);
}

TEST_CASE("polyharmonic examples") {
    for (int n : {3, 5, 7}) {
        const Polynomial u = Polynomial::constant(n, 1.0) - Polynomial::norm_squared(n);
        CHECK(polyharmonic(u, 1) == Polynomial::constant(n, 2.0 * n));
        CHECK(polyharmonic(u.pow(2), 2) == Polynomial::constant(n, 8.0 * n * (n + 2)));
        CHECK(polyharmonic(u.pow(3), 3).degree() == 0);
    }
}

TEST_CASE("zero coefficients are never stored") {
    const int n = 3;
    Polynomial p = Polynomial::variable(n, 0) - Polynomial::variable(n, 0);
    CHECK(p.is_zero());
    p.add_term({1, 0, 0}, 2.0);
    p.add_term({1, 0, 0}, -2.0);
    CHECK(p.terms().empty());
}

TEST_CASE("polyharmonic agrees with nested finite differences") {
    std::mt19937_64 rng(11);
    const int n = 5;
    const Polynomial annulus2 = radial_poly(n, 0.3, 1.0, 2);
    const Polynomial f2 = polyharmonic(annulus2, 2);
    CHECK(f2.degree() == 4);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Point y = testutil::random_point(n, 0.0, 1.2, rng);
        worst = std::max(worst, std::abs(fd_polyharmonic(annulus2, 2, y) - f2(y)) / std::max(1.0, std::abs(f2(y))));
    }
    CHECK(worst < 1e-6);

    // random polynomials, k = 1 and 2
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Polynomial p(3);
        for (int t = 0; t < 6; ++t) p.add_term({deg(rng), deg(rng), deg(rng)}, coef(rng));
        const int k = 1 + trial % 2;
        const Point y = testutil::random_point(3, 0.0, 1.0, rng);
        const double want = polyharmonic(p, k)(y);
        CHECK(std::abs(fd_polyharmonic(p, k, y) - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("polyharmonic is linear") {
    const int n = 5;
    const Polynomial p = radial_poly(n, 0.2, 1.0, 2) * Polynomial::variable(n, 0);
    const Polynomial q = Polynomial::norm_squared(n).pow(3) + Polynomial::variable(n, 3).pow(5);
    const Polynomial lhs = polyharmonic(p * 3.0 + q * -2.0, 2);
    const Polynomial rhs = polyharmonic(p, 2) * 3.0 + polyharmonic(q, 2) * -2.0;
    const Polynomial diff = lhs - rhs;
    for (const auto& [alpha, c] : diff.terms()) CHECK(std::abs(c) < 1e-9);
}

TEST_CASE("products and powers") {
    const int n = 2;
    const Polynomial x = Polynomial::variable(n, 0), y = Polynomial::variable(n, 1);
    const Polynomial p = (x + y).pow(3);
    CHECK(p.coefficient({3, 0}) == 1.0);
    CHECK(p.coefficient({2, 1}) == 3.0);
    CHECK(p.coefficient({1, 2}) == 3.0);
    CHECK(p.coefficient({0, 3}) == 1.0);
    CHECK(p(Point{0.5, 1.5}) == doctest::Approx(8.0));
    CHECK(p.derivative(0) == (x + y).pow(2) * 3.0);
}
