#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polygreen/finite_difference.h"
#include "polygreen/quadrature.h"
#include "test_util.h"

#include <cmath>
#include <numbers>

using namespace polygreen;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2m-1 exactly") {
    for (int m : {1, 2, 5, 16, 64}) {
        const GaussRule g = gauss_legendre(m);
        REQUIRE(g.nodes.size() == static_cast<std::size_t>(m));
        for (int p = 0; p <= 2 * m - 1; ++p) {
            double sum = 0.0;
            for (int i = 0; i < m; ++i) sum += g.weights[i] * std::pow(g.nodes[i], p);
            const double exact = (p % 2) ? 0.0 : 2.0 / (p + 1);
            CHECK(std::abs(sum - exact) < 1e-13);
        }
        for (int i = 1; i < m; ++i) CHECK(g.nodes[i - 1] < g.nodes[i]);
    }
}

TEST_CASE("shell quadrature reproduces volumes and radial moments") {
    using std::numbers::pi;
    for (int n : {3, 5}) {
        const double area = n == 3 ? 4.0 * pi : 8.0 * pi * pi / 3.0;
        for (double pole : {0.31, 0.35, 0.6, 0.95}) {
            const AxisymmetricShellQuadrature q(n, 0.3, 1.0, pole);
            const double vol = q.integrate([](const Point&) { return 1.0; }, 64, 64);
            CHECK(testutil::rel_err(vol, area * (1.0 - std::pow(0.3, n)) / n) < 1e-12);
            const double m2 = q.integrate([](const Point& y) { return y.norm2(); }, 64, 64);
            CHECK(testutil::rel_err(m2, area * (1.0 - std::pow(0.3, n + 2)) / (n + 2)) < 1e-12);
        }
        const AxisymmetricShellQuadrature ball(n, 0.0, 1.0, 0.4);
        const double vol = ball.integrate([](const Point&) { return 1.0; }, 64, 64);
        CHECK(testutil::rel_err(vol, area / n) < 1e-12);
    }
}

TEST_CASE("shell quadrature handles the pole singularity") {
    // int_{B_1} |x - y|^{-1} dy in R^3 = 2 pi (1 - |x|^2 / 3) for |x| < 1
    const double t = 0.45;
    const AxisymmetricShellQuadrature q(3, 0.0, 1.0, t);
    const Point x{t, 0.0, 0.0};
    const auto r = q.integrate_converged([&](const Point& y) { return 1.0 / distance(x, y); }, 1e-10);
    CHECK(r.converged);
    CHECK(testutil::rel_err(r.value, 2.0 * std::numbers::pi * (1.0 - t * t / 3.0)) < 1e-9);
}

TEST_CASE("integrate_converged reports its last change") {
    const AxisymmetricShellQuadrature q(3, 0.2, 1.0, 0.5);
    const auto r = q.integrate_converged([](const Point& y) { return std::exp(y[0]) * y.norm(); }, 1e-8);
    CHECK(r.converged);
    CHECK(r.last_change < 1e-8);
    CHECK(r.nodes >= 16);
}

TEST_CASE("multi-indices enumerate all partials") {
    CHECK(multi_indices(3, 0).size() == 1);
    CHECK(multi_indices(3, 1).size() == 3);
    CHECK(multi_indices(3, 2).size() == 6);
    CHECK(multi_indices(5, 4).size() == 70);
    const auto m = multi_indices(3, 2);
    CHECK(m.front() == std::vector<int>{2, 0, 0});
    for (const auto& a : m) CHECK(a[0] + a[1] + a[2] == 2);
}

TEST_CASE("finite differences of analytic functions") {
    const ScalarField f = [](const Point& y) { return std::sin(y[0]) * std::exp(2.0 * y[1]) + y[2] * y[2] * y[0]; };
    const Point y{0.3, -0.2, 0.7};
    const double h = 1e-2;
    CHECK(partial_derivative(f, y, {1, 0, 0}, h) ==
          doctest::Approx(std::cos(0.3) * std::exp(-0.4) + 0.49).epsilon(1e-9));
    CHECK(partial_derivative(f, y, {1, 1, 0}, h) == doctest::Approx(2.0 * std::cos(0.3) * std::exp(-0.4)).epsilon(1e-8));
    CHECK(partial_derivative(f, y, {1, 0, 2}, h) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(partial_derivative(f, y, {0, 3, 0}, 5e-2) == doctest::Approx(8.0 * std::sin(0.3) * std::exp(-0.4)).epsilon(1e-6));

    const auto grad = derivative_tensor(f, y, 1, h);
    REQUIRE(grad.size() == 3);
    CHECK(grad[2] == doctest::Approx(2.0 * 0.7 * 0.3).epsilon(1e-9));
    CHECK(max_abs({-3.0, 2.0}) == 3.0);
}

TEST_CASE("derivative step factor") {
    CHECK(derivative_step_factor(1, 1e-3) == doctest::Approx(std::pow(1e-14, 0.2)));
    CHECK(derivative_step_factor(4, 1e-3) == doctest::Approx(std::pow(1e-14, 0.125)));
    CHECK(derivative_step_factor(1, 0.5) == 0.5);
    CHECK(stencil_half_width({2, 1, 0}) > 0.0);
}
