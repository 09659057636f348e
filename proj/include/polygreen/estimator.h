#pragma once

#include "polygreen/geometry.h"

#include <json.hpp>

#include <utility>
#include <vector>

namespace polygreen {

struct ScanOptions {
    int samples = 200;               // seeded uniform random pairs on top of the stratified probes
    unsigned long long seed = 7;
    double q = 0.5;                  // admissible hole scales: eps < q * b / diam(hole)
    double tol = 1e-10;              // series tolerance for annulus evaluations
    int threads = 0;                 // 0 = hardware concurrency
    int level = 0;                   // stratified-probe refinement level (directions double per level)
    bool keep_pairs = false;         // record every probe in the report
};

struct PairRecord {
    double epsilon = 0.0;
    Point x, y;
    double value = 0.0;  // the weighted quantity entering the supremum
    bool flagged = false;
};

/// One statistic per hole scale.
struct ScanReport {
    std::vector<double> epsilon_grid;  // strictly decreasing
    std::vector<double> statistic;
    int sample_count = 0;              // pairs per hole scale
    unsigned long long seed = 0;
    int flagged = 0;                   // evaluations that hit the mode cap
    nlohmann::json metadata;
    std::vector<PairRecord> pairs;     // filled when ScanOptions::keep_pairs
};

/// M(eps) = max over probes of |x-y|^{n-2k} |G_eps(x,y)| on the annuli
/// eps < |y| < b. Probes: hole-adjacent shells eps*{1.05,1.25,2}, shells near
/// b, diagonal-adjacent pairs, and `samples` uniform random pairs.
ScanReport scan_uniform(const ProblemSpec& spec, double outer, const std::vector<double>& eps_grid,
                        const ScanOptions& options);

/// D_r(eps) = max over probes of |x-y|^{n-2k+r} max_alpha |d^alpha_y G_eps(x,y)|,
/// with y at distance eps*{0.05,0.1,0.2,0.4,0.7,1} from the hole and x on
/// shells from 2 eps out to 0.8 b.
ScanReport scan_derivative(const ProblemSpec& spec, double outer, const std::vector<double>& eps_grid, int order,
                           const ScanOptions& options);

/// The same weighted derivative supremum on the ball B_b without hole.
double fixed_ball_derivative_sup(const ProblemSpec& spec, double outer, int order, const ScanOptions& options);

/// Relative error |eps^{n-2k} G_eps(eps x, eps y) - G_ext(x, y)| / |G_ext(x, y)|,
/// maximised over the probe pairs, with G_ext the Green function of the
/// exterior of the unit ball.
ScanReport scaling_limit(const ProblemSpec& spec, double outer, const std::vector<double>& eps_grid,
                         const std::vector<std::pair<Point, Point>>& probes, const ScanOptions& options);

/// Radial cutoff: 1 on |y| <= delta, 0 on |y| >= 2 delta, and
/// S((|y| - delta)/delta) between, S(t) = 1 - I(t)/I(1),
/// I(t) = int_0^t tau^{2m} (1-tau)^{2m} dtau. C^{2m} and monotone.
struct CutoffSpec {
    double delta = 0.15;
    int order = 2;  // m
};

double cutoff_eval(const Point& y, const CutoffSpec& cutoff);

struct GlueReport {
    double epsilon = 0.0;
    double delta = 0.0;
    double sup_residual = 0.0;  // sup |u_{x,eps,delta}(y)|
    int samples = 0;
    unsigned long long seed = 0;
    int flagged = 0;
    std::vector<PairRecord> pairs;
};

/// The glued kernel eta(y) G_ext(x,y) + (1 - eta(y)) G_ball(x,y) minus the
/// true annulus Green function, maximised over x outside the shell
/// delta/2 <= |x| <= 3 delta and y in the annulus.
GlueReport glue_residual(const ProblemSpec& spec, double outer, double eps, const CutoffSpec& cutoff,
                         const ScanOptions& options);

}  // namespace polygreen
