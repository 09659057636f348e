#include "polygreen/estimator.h"

#include "polygreen/annulus_green.h"
#include "polygreen/ball_green.h"
#include "polygreen/errors.h"
#include "polygreen/exterior_green.h"
#include "polygreen/finite_difference.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace polygreen {

namespace {

constexpr double kHoleDiameter = 2.0;  // the hole is eps * B_1

struct Sample {
    Point x, y;
};

struct Outcome {
    double value = 0.0;
    bool flagged = false;
};

// Runs f(i) for i in [0, count) on up to `threads` workers; the result
// vector is indexed, so reductions over it do not depend on scheduling.
template <class F>
std::vector<Outcome> parallel_map(std::size_t count, int threads, F f) {
    std::vector<Outcome> out(count);
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::size_t error_index = count;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return out;
}

Point random_direction(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Point p(n);
    for (;;) {
        for (int i = 0; i < n; ++i) p[i] = g(rng);
        const double r = p.norm();
        if (r > 1e-8) return p * (1.0 / r);
    }
}

// Unit vector orthogonal to u.
Point orthogonal_direction(const Point& u, std::mt19937_64& rng) {
    for (;;) {
        Point v = random_direction(u.dim(), rng);
        v -= u * dot(u, v);
        const double r = v.norm();
        if (r > 1e-6) return v * (1.0 / r);
    }
}

// cos(theta) u + sin(theta) v
Point rotate(const Point& u, const Point& v, double theta) { return u * std::cos(theta) + v * std::sin(theta); }

// Uniform point in {inner < |y| < outer}.
Point uniform_in_shell(int n, double inner, double outer, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double lo = std::pow(inner, n), hi = std::pow(outer, n);
    const double r = std::pow(lo + U(rng) * (hi - lo), 1.0 / n);
    return random_direction(n, rng) * r;
}

void validate_grid(const std::vector<double>& grid, double limit) {
    if (grid.empty()) throw PreconditionError("empty hole-scale grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw PreconditionError("hole scales must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1])) throw PreconditionError("hole-scale grid must be strictly decreasing");
        if (!(grid[i] < limit))
            throw PreconditionError("hole scale " + std::to_string(grid[i]) + " violates eps < q b / diam(hole) = " +
                                    std::to_string(limit));
    }
}

void validate_common(const ProblemSpec&, double outer, const ScanOptions& opt) {
    if (!(outer > 0.0)) throw PreconditionError("outer radius must be positive");
    if (!(opt.q > 0.0 && opt.q < 1.0)) throw PreconditionError("q must lie in (0, 1)");
    if (opt.samples < 0) throw PreconditionError("sample count must be nonnegative");
}

int direction_count(const ScanOptions& opt) { return (4 + opt.samples / 100) << std::max(opt.level, 0); }

nlohmann::json base_metadata(const ProblemSpec& spec, double outer, const ScanOptions& opt) {
    return {{"n", spec.n()}, {"k", spec.k()}, {"b", outer},    {"q", opt.q},
            {"tol", opt.tol}, {"samples", opt.samples}, {"seed", opt.seed}, {"level", opt.level}};
}

std::vector<Sample> uniform_scan_samples(int n, double eps, double b, const ScanOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const std::vector<double> y_radii = {1.05 * eps, 1.25 * eps, 2.0 * eps, 0.5 * b, 0.95 * b, 0.99 * b};
    const std::vector<double> x_radii = {1.05 * eps, 1.25 * eps, 2.0 * eps, 4.0 * eps,
                                         0.25 * b,   0.5 * b,    0.8 * b,   0.95 * b};
    const std::vector<double> angles = {0.0, std::numbers::pi / 6, std::numbers::pi / 2, std::numbers::pi};
    const std::vector<double> gaps = {1e-1, 1e-2, 1e-3};
    AnnulusDomain dom(eps, b);
    std::vector<Sample> out;
    const int dirs = direction_count(opt);
    for (int d = 0; d < dirs; ++d) {
        const Point u = random_direction(n, rng);
        const Point v = orthogonal_direction(u, rng);
        for (double ry : y_radii) {
            const Point y = u * ry;
            for (double th : angles)
                for (double rx : x_radii) {
                    const Point x = rotate(u, v, th) * rx;
                    if (distance(x, y) > 1e-9 * b) out.push_back({x, y});
                }
            for (double g : gaps)
                out.push_back({y + random_direction(n, rng) * (g * dom.distance_to_boundary(y)), y});
        }
    }
    for (int i = 0; i < opt.samples; ++i) {
        Point x = uniform_in_shell(n, eps, b, rng);
        Point y = uniform_in_shell(n, eps, b, rng);
        out.push_back({std::move(x), std::move(y)});
    }
    return out;
}

std::vector<Sample> derivative_scan_samples(int n, double eps, double b, const ScanOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const std::vector<double> y_radii = {1.05 * eps, 1.1 * eps, 1.2 * eps, 1.4 * eps, 1.7 * eps, 2.0 * eps};
    const std::vector<double> x_radii = {2.0 * eps, 4.0 * eps, 0.25 * b, 0.4 * b, 0.5 * b, 0.8 * b};
    const std::vector<double> angles = {0.0, std::numbers::pi / 2, std::numbers::pi};
    std::vector<Sample> out;
    const int dirs = direction_count(opt);
    for (int d = 0; d < dirs; ++d) {
        const Point u = random_direction(n, rng);
        const Point v = orthogonal_direction(u, rng);
        for (double ry : y_radii)
            for (double th : angles)
                for (double rx : x_radii) {
                    Point x = rotate(u, v, th) * rx;
                    if (distance(x, u * ry) > 1e-6 * b) out.push_back({std::move(x), u * ry});
                }
    }
    for (int i = 0; i < opt.samples; ++i) {
        Point x = uniform_in_shell(n, eps, b, rng);
        Point y = uniform_in_shell(n, eps, b, rng);
        if (distance(x, y) < 1e-6 * b) continue;
        out.push_back({std::move(x), std::move(y)});
    }
    return out;
}

void keep(const ScanOptions& opt, double eps, const std::vector<Sample>& samples, const std::vector<Outcome>& values,
          std::vector<PairRecord>& out) {
    if (!opt.keep_pairs) return;
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.push_back({eps, samples[i].x, samples[i].y, values[i].value, values[i].flagged});
}

double max_of(const std::vector<Outcome>& v, int& flagged) {
    double m = 0.0;
    for (const Outcome& o : v) {
        m = std::max(m, o.value);
        if (o.flagged) ++flagged;
    }
    return m;
}

}  // namespace

ScanReport scan_uniform(const ProblemSpec& spec, double outer, const std::vector<double>& eps_grid,
                        const ScanOptions& opt) {
    validate_common(spec, outer, opt);
    validate_grid(eps_grid, opt.q * outer / kHoleDiameter);
    ScanReport report;
    report.epsilon_grid = eps_grid;
    report.seed = opt.seed;
    report.metadata = base_metadata(spec, outer, opt);
    report.metadata["experiment"] = "scan-uniform";
    const int n = spec.n();
    const double weight_exp = -spec.green_exponent();
    for (double eps : eps_grid) {
        AnnulusGreenOptions ao;
        ao.tol = opt.tol;
        const AnnulusGreen green(spec, AnnulusDomain(eps, outer), ao);
        const std::vector<Sample> samples = uniform_scan_samples(n, eps, outer, opt);
        const auto values = parallel_map(samples.size(), opt.threads, [&](std::size_t i) {
            const auto& [x, y] = samples[i];
            const GreenEvaluation g = green.evaluate(x, y);
            return Outcome{std::pow(distance(x, y), weight_exp) * std::abs(g.value), !g.converged};
        });
        keep(opt, eps, samples, values, report.pairs);
        report.statistic.push_back(max_of(values, report.flagged));
        report.sample_count = static_cast<int>(samples.size());
    }
    return report;
}

ScanReport scan_derivative(const ProblemSpec& spec, double outer, const std::vector<double>& eps_grid, int order,
                           const ScanOptions& opt) {
    validate_common(spec, outer, opt);
    if (order < 1 || order > 2 * spec.k()) throw PreconditionError("derivative order must lie in [1, 2k]");
    validate_grid(eps_grid, opt.q * outer / kHoleDiameter);
    ScanReport report;
    report.epsilon_grid = eps_grid;
    report.seed = opt.seed;
    report.metadata = base_metadata(spec, outer, opt);
    report.metadata["experiment"] = "scan-derivative";
    report.metadata["r"] = order;
    const int n = spec.n();
    const double weight_exp = order - spec.green_exponent();
    for (double eps : eps_grid) {
        AnnulusGreenOptions ao;
        ao.tol = opt.tol;
        const AnnulusGreen green(spec, AnnulusDomain(eps, outer), ao);
        const std::vector<Sample> samples = derivative_scan_samples(n, eps, outer, opt);
        const auto values = parallel_map(samples.size(), opt.threads, [&](std::size_t i) {
            const auto& [x, y] = samples[i];
            return Outcome{std::pow(distance(x, y), weight_exp) * max_abs(green.derivative(x, y, order)), false};
        });
        keep(opt, eps, samples, values, report.pairs);
        report.statistic.push_back(max_of(values, report.flagged));
        report.sample_count = static_cast<int>(samples.size());
    }
    return report;
}

double fixed_ball_derivative_sup(const ProblemSpec& spec, double outer, int order, const ScanOptions& opt) {
    validate_common(spec, outer, opt);
    if (order < 1 || order > 2 * spec.k()) throw PreconditionError("derivative order must lie in [1, 2k]");
    const int n = spec.n();
    const BallDomain ball = BallDomain::centered(n, outer);
    const BoggioKernel kernel(spec, ball);
    std::mt19937_64 rng(opt.seed);
    std::vector<Sample> samples;
    const std::vector<double> radii = {0.0, 0.25 * outer, 0.5 * outer, 0.8 * outer, 0.95 * outer};
    const std::vector<double> gaps = {1e-1, 1e-2, 1e-3};
    const int dirs = direction_count(opt);
    for (int d = 0; d < dirs; ++d) {
        const Point u = random_direction(n, rng);
        const Point v = orthogonal_direction(u, rng);
        for (double ry : radii) {
            const Point y = u * ry;
            for (double rx : radii)
                for (double th : {0.0, std::numbers::pi / 2, std::numbers::pi}) {
                    const Point x = rotate(u, v, th) * rx;
                    if (distance(x, y) > 1e-6 * outer) samples.push_back({x, y});
                }
            for (double g : gaps)
                samples.push_back({y + random_direction(n, rng) * (g * ball.distance_to_boundary(y)), y});
        }
    }
    for (int i = 0; i < opt.samples << std::max(opt.level, 0); ++i) {
        Point x = uniform_in_shell(n, 0.0, outer, rng);
        Point y = uniform_in_shell(n, 0.0, outer, rng);
        samples.push_back({std::move(x), std::move(y)});
    }
    const double weight_exp = order - spec.green_exponent();
    const auto values = parallel_map(samples.size(), opt.threads, [&](std::size_t i) {
        const auto& [x, y] = samples[i];
        const double dxy = distance(x, y);
        const double h = derivative_step_factor(order, 1e-4) * std::min(dxy, ball.distance_to_boundary(y));
        ScalarField g = [&](const Point& z) { return kernel(x, z); };
        return Outcome{std::pow(dxy, weight_exp) * max_abs(derivative_tensor(g, y, order, h)), false};
    });
    int unused = 0;
    return max_of(values, unused);
}

ScanReport scaling_limit(const ProblemSpec& spec, double outer, const std::vector<double>& eps_grid,
                         const std::vector<std::pair<Point, Point>>& probes, const ScanOptions& opt) {
    validate_common(spec, outer, opt);
    validate_grid(eps_grid, opt.q * outer / kHoleDiameter);
    if (probes.empty()) throw PreconditionError("scaling_limit needs at least one probe pair");
    constexpr double kProbeMargin = 1e-2;
    for (const auto& [x, y] : probes) {
        require_dimension(x, spec);
        require_dimension(y, spec);
        // both sides vanish on the hole boundary, where the relative error is meaningless
        if (!(x.norm() > 1.0 + kProbeMargin) || !(y.norm() > 1.0 + kProbeMargin))
            throw DomainError("scaling-limit probes must lie outside the closed unit ball (margin 1e-2)");
        if (x == y) throw SingularityError("scaling-limit probe on the diagonal");
        if (!(eps_grid.front() * std::max(x.norm(), y.norm()) < outer))
            throw PreconditionError("scaled probe leaves the outer ball");
    }
    ScanReport report;
    report.epsilon_grid = eps_grid;
    report.seed = opt.seed;
    report.sample_count = static_cast<int>(probes.size());
    report.metadata = base_metadata(spec, outer, opt);
    report.metadata["experiment"] = "scaling-limit";
    nlohmann::json jp = nlohmann::json::array();
    for (const auto& [x, y] : probes) {
        std::vector<double> xv(x.coords().begin(), x.coords().end()), yv(y.coords().begin(), y.coords().end());
        jp.push_back({{"x", xv}, {"y", yv}});
    }
    report.metadata["probes"] = jp;

    const ExteriorKernel exterior = ExteriorKernel::ball_hole(spec, 1.0);
    const double e = -spec.green_exponent();  // n - 2k
    for (double eps : eps_grid) {
        AnnulusGreenOptions ao;
        ao.tol = opt.tol;
        const AnnulusGreen green(spec, AnnulusDomain(eps, outer), ao);
        const auto values = parallel_map(probes.size(), opt.threads, [&](std::size_t i) {
            const auto& [x, y] = probes[i];
            const GreenEvaluation g = green.evaluate(x * eps, y * eps);
            const double limit = exterior(x, y);
            return Outcome{std::abs(std::pow(eps, e) * g.value - limit) / std::abs(limit), !g.converged};
        });
        if (opt.keep_pairs)
            for (std::size_t i = 0; i < probes.size(); ++i)
                report.pairs.push_back({eps, probes[i].first * eps, probes[i].second * eps, values[i].value,
                                        values[i].flagged});
        report.statistic.push_back(max_of(values, report.flagged));
    }
    return report;
}

double cutoff_eval(const Point& y, const CutoffSpec& cutoff) {
    if (!(cutoff.delta > 0.0)) throw PreconditionError("cutoff delta must be positive");
    if (cutoff.order < 0) throw PreconditionError("cutoff order must be nonnegative");
    const double t = (y.norm() - cutoff.delta) / cutoff.delta;
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    const int m = 2 * cutoff.order;
    // I(t) = sum_j C(m,j) (-1)^j t^{m+j+1} / (m+j+1)
    auto integral = [m](double s) {
        double sum = 0.0, binom = 1.0;
        for (int j = 0; j <= m; ++j) {
            sum += ((j % 2) ? -1.0 : 1.0) * binom * std::pow(s, m + j + 1) / (m + j + 1);
            binom = binom * (m - j) / (j + 1);
        }
        return sum;
    };
    // the integrand is symmetric about 1/2, so S(t) = I(1-t)/I(1) is the stable form past the midpoint
    return t <= 0.5 ? 1.0 - integral(t) / integral(1.0) : integral(1.0 - t) / integral(1.0);
}

GlueReport glue_residual(const ProblemSpec& spec, double outer, double eps, const CutoffSpec& cutoff,
                         const ScanOptions& opt) {
    validate_common(spec, outer, opt);
    const double delta = cutoff.delta;
    if (!(delta > 0.0 && delta < outer / 3.0)) throw PreconditionError("cutoff delta must lie in (0, b/3)");
    if (!(eps > 0.0 && eps < delta / (2.0 * kHoleDiameter)))
        throw PreconditionError("glue_residual requires 0 < eps < delta / (2 diam(hole))");
    const int n = spec.n();
    const ExteriorKernel exterior = ExteriorKernel::ball_hole(spec, eps);
    const BoggioKernel ball(spec, BallDomain::centered(n, outer));
    AnnulusGreenOptions ao;
    ao.tol = opt.tol;
    const AnnulusGreen green(spec, AnnulusDomain(eps, outer), ao);

    std::mt19937_64 rng(opt.seed);
    std::vector<double> x_radii;
    for (double r : {1.05 * eps, 1.5 * eps, 3.0 * eps, 0.25 * delta, 0.45 * delta})
        if (r > eps && r < 0.5 * delta) x_radii.push_back(r);
    for (double r : {3.3 * delta, 0.5 * (3.0 * delta + outer), 0.95 * outer}) x_radii.push_back(r);
    const std::vector<double> y_radii = {1.05 * eps, 1.5 * eps,  3.0 * eps,   0.5 * delta, delta, 1.5 * delta,
                                         2.0 * delta, 2.5 * delta, 0.5 * outer, 0.95 * outer};
    const std::vector<double> angles = {0.0, std::numbers::pi / 3, std::numbers::pi};
    std::vector<Sample> samples;
    const int dirs = direction_count(opt);
    for (int d = 0; d < dirs; ++d) {
        const Point u = random_direction(n, rng);
        const Point v = orthogonal_direction(u, rng);
        for (double rx : x_radii)
            for (double th : angles)
                for (double ry : y_radii) {
                    const Point x = u * rx, y = rotate(u, v, th) * ry;
                    if (distance(x, y) > 1e-3 * std::min(rx, ry)) samples.push_back({x, y});
                }
    }
    for (int i = 0; i < opt.samples; ++i) {
        Point x(n);
        do {
            x = uniform_in_shell(n, eps, outer, rng);
        } while (x.norm() >= 0.5 * delta && x.norm() <= 3.0 * delta);
        Point y = uniform_in_shell(n, eps, outer, rng);
        if (distance(x, y) < 1e-3 * eps) continue;
        samples.push_back({std::move(x), std::move(y)});
    }

    const auto values = parallel_map(samples.size(), opt.threads, [&](std::size_t i) {
        const auto& [x, y] = samples[i];
        const double eta = cutoff_eval(y, cutoff);
        double glued = 0.0;
        if (eta > 0.0) glued += eta * exterior(x, y);
        if (eta < 1.0) glued += (1.0 - eta) * ball(x, y);
        const GreenEvaluation g = green.evaluate(x, y);
        return Outcome{std::abs(glued - g.value), !g.converged};
    });
    GlueReport report;
    report.epsilon = eps;
    report.delta = delta;
    report.samples = static_cast<int>(samples.size());
    report.seed = opt.seed;
    report.sup_residual = max_of(values, report.flagged);
    keep(opt, eps, samples, values, report.pairs);
    return report;
}

}  // namespace polygreen
