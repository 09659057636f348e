#include "verify.h"

#include "polygreen/annulus_green.h"
#include "polygreen/ball_green.h"
#include "polygreen/estimator.h"
#include "polygreen/exterior_green.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace polygreen::cli {

namespace {

Point random_point(int n, double rmin, double rmax, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(rmin, rmax);
    Point p(n);
    double r2 = 0.0;
    do {
        for (int i = 0; i < n; ++i) p[i] = g(rng);
        r2 = p.norm2();
    } while (r2 < 1e-12);
    return p * (u(rng) / std::sqrt(r2));
}

CheckResult below(std::string name, double measured, double threshold) {
    return {std::move(name), measured <= threshold, measured, threshold};
}

}  // namespace

std::vector<CheckResult> run_verify(const ProblemSpec& spec, unsigned long long seed, int threads) {
    const int n = spec.n(), k = spec.k();
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;

    double inv_err = 0.0, invol_err = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Point x = random_point(n, 0.1, 10.0, rng), y = random_point(n, 0.1, 10.0, rng);
        const auto [lhs, rhs] = mobius_distance_check(x, y);
        inv_err = std::max(inv_err, std::abs(lhs - rhs) / rhs);
        invol_err = std::max(invol_err, distance(invert(invert(x)), x) / x.norm());
    }
    out.push_back(below("inversion distance identity", inv_err, 1e-12));
    out.push_back(below("inversion involution", invol_err, 1e-12));

    const BoggioKernel ball(spec, BallDomain::centered(n, 1.0));
    double asym = 0.0, min_ball = 1.0;
    for (int i = 0; i < 200; ++i) {
        const Point x = random_point(n, 0.0, 0.99, rng), y = random_point(n, 0.0, 0.99, rng);
        const double g = ball(x, y);
        asym = std::max(asym, std::abs(g - ball(y, x)) / std::abs(g));
        min_ball = std::min(min_ball, g * std::pow(distance(x, y), n - 2 * k));
    }
    out.push_back(below("ball kernel symmetry", asym, 1e-12));
    out.push_back({"ball kernel positivity", min_ball > 0.0, min_ball, 0.0});

    const ExteriorKernel ext = ExteriorKernel::ball_hole(spec, 0.5);
    double ext_asym = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Point x = random_point(n, 0.55, 5.0, rng), y = random_point(n, 0.55, 5.0, rng);
        const double g = ext(x, y);
        ext_asym = std::max(ext_asym, std::abs(g - ext(y, x)) / std::abs(g));
    }
    out.push_back(below("exterior kernel symmetry", ext_asym, 1e-12));

    // sum_l C_l^lambda(t) h^l = (1 - 2th + h^2)^{-lambda}
    const double lambda = 0.5 * (n - 2);
    double gen_err = 0.0;
    for (double t : {-0.9, -0.3, 0.2, 0.7})
        for (double h : {0.1, 0.3, 0.5}) {
            double sum = 0.0, hp = 1.0;
            for (int l = 0; l < 200; ++l, hp *= h) sum += gegenbauer(l, lambda, t) * hp;
            const double direct = std::pow(1.0 - 2.0 * t * h + h * h, -lambda);
            gen_err = std::max(gen_err, std::abs(sum - direct) / direct);
        }
    out.push_back(below("Gegenbauer generating function", gen_err, 1e-10));

    const AnnulusDomain dom(0.3, 1.0);
    const AnnulusGreen green(spec, dom);
    double fs_err = 0.0, route_err = 0.0;
    for (int i = 0; i < 6; ++i) {
        const Point x = random_point(n, 0.4, 0.9, rng), y = random_point(n, 0.4, 0.9, rng);
        if (std::abs(x.norm() - y.norm()) < 0.1) continue;
        const double t = dot(x, y) / (x.norm() * y.norm());
        double fs = 0.0, modal = 0.0;
        for (int l = 0; l < 400; ++l) {
            const double z = zonal_harmonic(l, t, spec);
            fs += green.free_space_mode(l, y.norm(), x.norm()) * z;
            modal += modal_solve(l, x.norm(), dom, spec).value(y.norm()) * z;
        }
        const double gamma = fundamental_solution(x, y, spec);
        fs_err = std::max(fs_err, std::abs(fs - gamma) / gamma);
        const double g = green(x, y);
        route_err = std::max(route_err, std::abs(modal - g) / std::abs(g));
    }
    out.push_back(below("free-space zonal expansion", fs_err, 1e-10));
    out.push_back(below("annulus kernel, image route vs direct modal route", route_err, 1e-8));

    if (k == 1) {
        ScanOptions opt;
        opt.samples = 50;
        opt.seed = seed;
        opt.threads = threads;
        const ScanReport r = scan_uniform(spec, 1.0, {0.2, 0.05}, opt);
        const double bound = fundamental_constant(spec);
        const double stat = *std::max_element(r.statistic.begin(), r.statistic.end());
        out.push_back({"k=1 scan below the domain-independent constant", stat < bound && r.flagged == 0, stat, bound});
    }
    return out;
}

}  // namespace polygreen::cli
