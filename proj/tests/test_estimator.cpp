#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polygreen/annulus_green.h"
#include "polygreen/ball_green.h"
#include "polygreen/errors.h"
#include "polygreen/estimator.h"
#include "test_util.h"

#include <algorithm>
#include <numbers>

using namespace polygreen;

namespace {

ScanOptions quick(int samples = 40) {
    ScanOptions o;
    o.samples = samples;
    return o;
}

double spread(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

}  // namespace

TEST_CASE("cutoff examples") {
    const CutoffSpec c{0.15, 2};
    CHECK(cutoff_eval(Point::unit(5, 0, 0.075), c) == 1.0);
    CHECK(cutoff_eval(Point::unit(5, 0, 0.45), c) == 0.0);
    CHECK(cutoff_eval(Point::unit(5, 0, 0.225), c) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cutoff_eval(Point::unit(5, 0, 0.15), c) == 1.0);
    CHECK(cutoff_eval(Point::unit(5, 0, 0.30), c) == 0.0);
}

TEST_CASE("cutoff is monotone and flat to order 2m at both ends") {
    const CutoffSpec c{0.2, 2};
    double prev = 1.0;
    for (int i = 0; i <= 400; ++i) {
        const double v = cutoff_eval(Point::unit(3, 1, 0.1 + 0.4 * i / 400.0), c);
        CHECK(v <= prev);
        prev = v;
    }
    // S(t) - 1 ~ t^{2m+1} near t = 0 and S(t) ~ (1-t)^{2m+1} near t = 1
    const auto S = [&](double t) { return cutoff_eval(Point::unit(3, 0, c.delta * (1.0 + t)), c); };
    const double s1 = std::log((1.0 - S(1e-2)) / (1.0 - S(1e-3))) / std::log(10.0);
    const double s2 = std::log(S(1.0 - 1e-2) / S(1.0 - 1e-3)) / std::log(10.0);
    CHECK(s1 == doctest::Approx(2 * c.order + 1).epsilon(0.01));
    CHECK(s2 == doctest::Approx(2 * c.order + 1).epsilon(0.01));
    // symmetric about the midpoint
    for (double t : {0.1, 0.3, 0.45}) CHECK(S(t) + S(1.0 - t) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("scan preconditions") {
    const ProblemSpec s(5, 2);
    CHECK_THROWS_AS(scan_uniform(s, 1.0, {0.3}, quick()), PreconditionError);
    CHECK_THROWS_AS(scan_uniform(s, 1.0, {0.1, 0.2}, quick()), PreconditionError);
    CHECK_THROWS_AS(scan_uniform(s, 1.0, {0.1, 0.1}, quick()), PreconditionError);
    CHECK_THROWS_AS(scan_uniform(s, 1.0, {}, quick()), PreconditionError);
    CHECK_THROWS_AS(scan_uniform(s, 0.0, {0.1}, quick()), PreconditionError);
    ScanOptions bad_q = quick();
    bad_q.q = 1.0;
    CHECK_THROWS_AS(scan_uniform(s, 1.0, {0.1}, bad_q), PreconditionError);
    CHECK_THROWS_AS(scan_derivative(s, 1.0, {0.1}, 0, quick()), PreconditionError);
    CHECK_THROWS_AS(scan_derivative(s, 1.0, {0.1}, 5, quick()), PreconditionError);
    CHECK_THROWS_AS(fixed_ball_derivative_sup(s, 1.0, 5, quick()), PreconditionError);
}

TEST_CASE("k = 1 uniform scan stays below the domain-independent constant") {
    const ProblemSpec s(3, 1);
    const ScanReport r = scan_uniform(s, 1.0, {0.2, 0.1, 0.05, 0.02, 0.01}, quick(100));
    const double bound = 1.0 / (4.0 * std::numbers::pi);
    for (double v : r.statistic) CHECK(v <= bound);
    CHECK(r.flagged == 0);
    CHECK(r.epsilon_grid.size() == r.statistic.size());
    CHECK(r.metadata.at("experiment") == "scan-uniform");
}

TEST_CASE("uniform scan is stable under resampling") {
    const ProblemSpec s(5, 2);
    ScanOptions a = quick(100), b = quick(100);
    b.seed = 12345;
    const ScanReport ra = scan_uniform(s, 1.0, {0.05}, a), rb = scan_uniform(s, 1.0, {0.05}, b);
    CHECK(std::abs(ra.statistic[0] / rb.statistic[0] - 1.0) < 0.1);
    const ScanReport coarse = scan_uniform(s, 1.0, {0.2, 0.05, 0.01}, quick());
    CHECK(spread(coarse.statistic) < 2.0);
}

TEST_CASE("derivative scan is stable under doubling the samples") {
    const ProblemSpec s(5, 2);
    ScanOptions a = quick(100), b = quick(200);
    const double da = scan_derivative(s, 1.0, {0.05}, 1, a).statistic[0];
    const double db = scan_derivative(s, 1.0, {0.05}, 1, b).statistic[0];
    CHECK(std::abs(db / da - 1.0) < 0.15);
}

TEST_CASE("derivative scan grows as the hole shrinks") {
    const ScanReport r = scan_derivative(ProblemSpec(5, 2), 1.0, {0.2, 0.05, 0.01}, 1, quick());
    CHECK(r.statistic[1] > r.statistic[0]);
    CHECK(r.statistic[2] > r.statistic[1]);
    CHECK(r.metadata.at("r") == 1);
}

TEST_CASE("fixed-ball derivative supremum is stable under refinement") {
    const ProblemSpec s(5, 2);
    ScanOptions coarse = quick(100), fine = quick(100);
    fine.level = 1;
    for (int r : {1, 2}) {
        const double c = fixed_ball_derivative_sup(s, 1.0, r, coarse), f = fixed_ball_derivative_sup(s, 1.0, r, fine);
        CHECK(std::isfinite(c));
        CHECK(std::abs(f / c - 1.0) < 0.2);
    }
}

TEST_CASE("scaling limit: probes and monotone convergence") {
    const ProblemSpec s(5, 2);
    const std::vector<std::pair<Point, Point>> probes = {{Point::unit(5, 0, 2.0), Point::unit(5, 0, -3.0)}};
    const ScanReport r = scaling_limit(s, 1.0, {0.1, 0.05, 0.02, 0.01}, probes, quick());
    for (std::size_t i = 1; i < r.statistic.size(); ++i) CHECK(r.statistic[i] < r.statistic[i - 1]);
    CHECK(r.flagged == 0);

    CHECK_THROWS_AS(scaling_limit(s, 1.0, {0.1}, {{Point::unit(5, 0, 0.5), Point::unit(5, 0, 2.0)}}, quick()),
                    DomainError);
    CHECK_THROWS_AS(scaling_limit(s, 1.0, {0.1}, {{Point::unit(5, 0, 1.001), Point::unit(5, 0, 2.0)}}, quick()),
                    DomainError);
    CHECK_THROWS_AS(scaling_limit(s, 1.0, {0.1}, {{Point::unit(5, 0, 2.0), Point::unit(5, 0, 2.0)}}, quick()),
                    SingularityError);
    CHECK_THROWS_AS(scaling_limit(s, 1.0, {0.1}, {}, quick()), PreconditionError);
}

TEST_CASE("k = 1 scaling limit approaches the first-order outer-boundary correction") {
    // eps G(eps x, eps y) = G_ext(x, y) - eps c (1 - 1/|x|)(1 - 1/|y|) / b + O(eps^2)
    const ProblemSpec s(3, 1);
    const Point x = Point::unit(3, 0, 2.0), y = Point::unit(3, 0, -3.0);
    const double image = y.norm() * distance(x, y * (1.0 / y.norm2()));
    const double g_ext = 1.0 / distance(x, y) - 1.0 / image;
    const double slope = (1.0 - 1.0 / x.norm()) * (1.0 - 1.0 / y.norm()) / g_ext;
    CHECK(slope == doctest::Approx(35.0 / 6.0));
    const ScanReport r = scaling_limit(s, 1.0, {0.04, 0.02, 0.01}, {{x, y}}, quick());
    double prev_gap = 1.0;
    for (std::size_t i = 0; i < r.statistic.size(); ++i) {
        const double gap = std::abs(r.statistic[i] / (slope * r.epsilon_grid[i]) - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.02);
}

TEST_CASE("glue residual preconditions") {
    const ProblemSpec s(5, 2);
    CHECK_THROWS_AS(glue_residual(s, 1.0, 0.05, CutoffSpec{0.15, 2}, quick()), PreconditionError);
    CHECK_THROWS_AS(glue_residual(s, 1.0, 0.01, CutoffSpec{0.4, 2}, quick()), PreconditionError);
    CHECK_THROWS_AS(glue_residual(s, 1.0, 0.0, CutoffSpec{0.15, 2}, quick()), PreconditionError);
}

TEST_CASE("glue residual is bounded across hole scales") {
    const ProblemSpec s(5, 2);
    std::vector<double> sup;
    for (double eps : {0.02, 0.01, 0.005}) {
        const GlueReport g = glue_residual(s, 1.0, eps, CutoffSpec{0.15, 2}, quick());
        CHECK(g.sup_residual > 0.0);
        CHECK(g.flagged == 0);
        CHECK(g.epsilon == eps);
        sup.push_back(g.sup_residual);
    }
    CHECK(spread(sup) < 2.0);
}

TEST_CASE("reports do not depend on the thread count") {
    const ProblemSpec s(5, 2);
    ScanOptions one = quick(), many = quick();
    one.threads = 1;
    many.threads = 4;
    const std::vector<double> grid = {0.1, 0.02};
    CHECK(scan_uniform(s, 1.0, grid, one).statistic == scan_uniform(s, 1.0, grid, many).statistic);
    CHECK(scan_derivative(s, 1.0, grid, 2, one).statistic == scan_derivative(s, 1.0, grid, 2, many).statistic);
    CHECK(glue_residual(s, 1.0, 0.01, CutoffSpec{}, one).sup_residual ==
          glue_residual(s, 1.0, 0.01, CutoffSpec{}, many).sup_residual);
}

TEST_CASE("pair records") {
    ScanOptions o = quick(10);
    o.keep_pairs = true;
    const ScanReport r = scan_uniform(ProblemSpec(5, 2), 1.0, {0.1, 0.05}, o);
    CHECK(r.pairs.size() == 2 * static_cast<std::size_t>(r.sample_count));
    double best = 0.0;
    for (const PairRecord& p : r.pairs)
        if (p.epsilon == 0.05) best = std::max(best, p.value);
    CHECK(best == r.statistic[1]);
    CHECK(scan_uniform(ProblemSpec(5, 2), 1.0, {0.1}, quick(10)).pairs.empty());
}

TEST_CASE("fixed-pair convergence to the ball kernel (observed, not asserted)") {
    const ProblemSpec s(5, 2);
    const BoggioKernel ball(s, BallDomain::centered(5));
    const Point x = Point::unit(5, 0, 0.5), y = Point::unit(5, 1, -0.4);
    for (double eps : {0.1, 0.01, 0.001}) {
        const double g = AnnulusGreen(s, AnnulusDomain(eps, 1.0))(x, y);
        MESSAGE("eps " << eps << ": |G_eps - G_ball| / G_ball = " << std::abs(g - ball(x, y)) / ball(x, y));
        CHECK(std::isfinite(g));
    }
}
