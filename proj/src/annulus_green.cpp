#include "polygreen/annulus_green.h"

#include "polygreen/ball_green.h"
#include "polygreen/errors.h"
#include "polygreen/finite_difference.h"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

namespace polygreen {

namespace {

constexpr std::size_t kCacheLimit = 1u << 20;

// Row scale for derivative order m: keeps falling factorials O(1) at large l.
double row_scale(int degree, int n, int m) { return std::pow(1.0 / (degree + n), m); }

}  // namespace

std::vector<double> indicial_exponents(int degree, const ProblemSpec& spec) {
    if (degree < 0) throw DomainError("harmonic degree must be nonnegative");
    const int n = spec.n(), k = spec.k();
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(2 * k));
    for (int j = 0; j < k; ++j) e.push_back(degree + 2.0 * j);
    for (int j = 0; j < k; ++j) e.push_back(2.0 - n - degree + 2.0 * j);
    return e;
}

double falling_factorial(double gamma, int m) {
    double f = 1.0;
    for (int i = 0; i < m; ++i) f *= gamma - i;
    return f;
}

// ---------------------------------------------------------------------------
// ModalGreenKernel

namespace {

// scale radius of basis function i on a region [lo, hi]
double basis_scale(double gamma, double lo, double hi) { return gamma >= 0.0 ? hi : lo; }

double branch_derivative(const std::vector<double>& exps, const std::vector<double>& coeffs, double lo, double hi,
                         double r, int m) {
    double s = 0.0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const double g = exps[i];
        s += coeffs[i] * falling_factorial(g, m) * std::pow(r / basis_scale(g, lo, hi), g);
    }
    return s / std::pow(r, m);
}

}  // namespace

double ModalGreenKernel::inner_derivative(double r, int m) const {
    return branch_derivative(exponents, inner_coeffs, inner_radius, source_radius, r, m);
}

double ModalGreenKernel::outer_derivative(double r, int m) const {
    return branch_derivative(exponents, outer_coeffs, source_radius, outer_radius, r, m);
}

double ModalGreenKernel::derivative(double r, int m) const {
    if (r < inner_radius || r > outer_radius) throw DomainError("modal kernel evaluated outside the annulus");
    return r < source_radius ? inner_derivative(r, m) : outer_derivative(r, m);
}

ModalGreenKernel modal_solve(int degree, double s, const AnnulusDomain& domain, const ProblemSpec& spec) {
    const double a = domain.inner(), b = domain.outer();
    if (!(s > a && s < b)) throw DomainError("source radius must satisfy a < s < b");
    const int n = spec.n(), k = spec.k();
    const int m2 = 2 * k;
    const int size = 2 * m2;

    ModalGreenKernel g;
    g.degree = degree;
    g.source_radius = s;
    g.inner_radius = a;
    g.outer_radius = b;
    g.exponents = indicial_exponents(degree, spec);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    int row = 0;
    // (r^m d^m/dr^m) of basis i at r, region [lo, hi]
    auto entry = [&](int i, double r, double lo, double hi, int m) {
        const double gm = g.exponents[static_cast<std::size_t>(i)];
        return falling_factorial(gm, m) * std::pow(r / basis_scale(gm, lo, hi), gm);
    };
    for (int m = 0; m < k; ++m, ++row) {
        const double sc = row_scale(degree, n, m);
        for (int i = 0; i < m2; ++i) A(row, i) = sc * entry(i, a, a, s, m);
    }
    for (int m = 0; m < k; ++m, ++row) {
        const double sc = row_scale(degree, n, m);
        for (int i = 0; i < m2; ++i) A(row, m2 + i) = sc * entry(i, b, s, b, m);
    }
    for (int m = 0; m < m2; ++m, ++row) {
        const double sc = row_scale(degree, n, m);
        for (int i = 0; i < m2; ++i) {
            A(row, i) = -sc * entry(i, s, a, s, m);
            A(row, m2 + i) = sc * entry(i, s, s, b, m);
        }
        // jump of s^{2k-1} g^{(2k-1)}: (-1)^k s^{1-n} s^{2k-1}
        if (m == m2 - 1) rhs(row) = sc * ((k % 2) ? -1.0 : 1.0) * std::pow(s, 2.0 * k - n);
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    g.condition_estimate = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!std::isfinite(g.condition_estimate) || g.condition_estimate > 1e15)
        throw NumericalError("modal interface system is singular for degree " + std::to_string(degree),
                             g.condition_estimate);
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    g.residual = (A * sol - rhs).lpNorm<Eigen::Infinity>();
    g.inner_coeffs.assign(sol.data(), sol.data() + m2);
    g.outer_coeffs.assign(sol.data() + m2, sol.data() + size);
    return g;
}

// ---------------------------------------------------------------------------
// Gegenbauer / zonal harmonics

double gegenbauer(int degree, double lambda, double t) {
    if (degree < 0) throw DomainError("Gegenbauer degree must be nonnegative");
    double c0 = 1.0;
    if (degree == 0) return c0;
    double c1 = 2.0 * lambda * t;
    for (int m = 1; m < degree; ++m) {
        const double c2 = (2.0 * (m + lambda) * t * c1 - (m + 2.0 * lambda - 1.0) * c0) / (m + 1.0);
        c0 = c1;
        c1 = c2;
    }
    return c1;
}

double zonal_harmonic(int degree, double t, const ProblemSpec& spec) {
    if (std::abs(t) > 1.0 + 1e-12) throw DomainError("zonal harmonic argument outside [-1, 1]");
    const int n = spec.n();
    t = std::clamp(t, -1.0, 1.0);
    return (2.0 * degree + n - 2.0) / ((n - 2.0) * unit_sphere_area(n)) * gegenbauer(degree, 0.5 * (n - 2), t);
}

int default_mode_cap() {
    if (const char* env = std::getenv("POLYGREEN_LMAX")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 100000) return static_cast<int>(v);
    }
    return 400;
}

// ---------------------------------------------------------------------------
// AnnulusGreen

AnnulusGreen::AnnulusGreen(ProblemSpec spec, AnnulusDomain domain, AnnulusGreenOptions options)
    : spec_(spec), domain_(domain), options_(options), fundamental_(fundamental_constant(spec)),
      ball_(spec, BallDomain::centered(spec.n(), domain.outer())),
      exterior_(ExteriorKernel::ball_hole(spec, domain.inner())) {
    if (!(options_.tol > 0.0)) throw PreconditionError("series tolerance must be positive");
    if (options_.mode_cap < 1) throw PreconditionError("mode cap must be positive");
    const int n = spec_.n(), k = spec_.k();
    free_space_.reserve(static_cast<std::size_t>(options_.mode_cap + 1));
    for (int l = 0; l <= options_.mode_cap; ++l) {
        // interface system at s = 1 for the mode bounded at 0 and decaying at infinity
        const std::vector<double> e = indicial_exponents(l, spec_);
        Eigen::MatrixXd A(2 * k, 2 * k);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * k);
        for (int m = 0; m < 2 * k; ++m) {
            const double sc = row_scale(l, n, m);
            for (int j = 0; j < k; ++j) {
                A(m, j) = -sc * falling_factorial(e[static_cast<std::size_t>(j)], m);
                A(m, k + j) = sc * falling_factorial(e[static_cast<std::size_t>(k + j)], m);
            }
        }
        rhs(2 * k - 1) = row_scale(l, n, 2 * k - 1) * ((k % 2) ? -1.0 : 1.0);
        const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
        FreeSpaceMode mode;
        mode.inner.assign(sol.data(), sol.data() + k);
        mode.outer.assign(sol.data() + k, sol.data() + 2 * k);
        free_space_.push_back(std::move(mode));
    }
}

const AnnulusGreen::FreeSpaceMode& AnnulusGreen::free_space(int degree) const {
    if (degree < 0 || degree > options_.mode_cap) throw DomainError("harmonic degree beyond the mode cap");
    return free_space_[static_cast<std::size_t>(degree)];
}

namespace {

// r^m d^m/dr^m of s^{2k-n} sum_j c_j (r/s)^{e_j}
double free_branch(const std::vector<double>& c, const std::vector<double>& e, std::size_t offset, double rho,
                   int m) {
    double v = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double g = e[offset + j];
        v += c[j] * falling_factorial(g, m) * std::pow(rho, g);
    }
    return v;
}

}  // namespace

double AnnulusGreen::free_space_mode(int degree, double r, double s) const {
    const FreeSpaceMode& f = free_space(degree);
    const std::vector<double> e = indicial_exponents(degree, spec_);
    const double rho = r / s;
    const double v = rho < 1.0 ? free_branch(f.inner, e, 0, rho, 0)
                               : free_branch(f.outer, e, static_cast<std::size_t>(spec_.k()), rho, 0);
    return std::pow(s, spec_.green_exponent()) * v;
}

AnnulusGreen::Coeffs AnnulusGreen::solve_ball_image(int degree, double s) const {
    const int n = spec_.n(), k = spec_.k();
    const double b = domain_.outer();
    const FreeSpaceMode& f = free_space(degree);
    const std::vector<double> e = indicial_exponents(degree, spec_);
    const double amp = std::pow(s, spec_.green_exponent());
    Eigen::MatrixXd A(k, k);
    Eigen::VectorXd rhs(k);
    for (int m = 0; m < k; ++m) {
        const double sc = row_scale(degree, n, m);
        for (int j = 0; j < k; ++j) A(m, j) = sc * falling_factorial(e[static_cast<std::size_t>(j)], m);
        rhs(m) = -sc * amp * free_branch(f.outer, e, static_cast<std::size_t>(k), b / s, m);
    }
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    return Coeffs(sol.data(), sol.data() + k);
}

AnnulusGreen::Coeffs AnnulusGreen::solve_hole_image(int degree, double s) const {
    const int n = spec_.n(), k = spec_.k();
    const double a = domain_.inner();
    const FreeSpaceMode& f = free_space(degree);
    const std::vector<double> e = indicial_exponents(degree, spec_);
    const double amp = std::pow(s, spec_.green_exponent());
    Eigen::MatrixXd A(k, k);
    Eigen::VectorXd rhs(k);
    for (int m = 0; m < k; ++m) {
        const double sc = row_scale(degree, n, m);
        for (int j = 0; j < k; ++j) A(m, j) = sc * falling_factorial(e[static_cast<std::size_t>(k + j)], m);
        rhs(m) = -sc * amp * free_branch(f.inner, e, 0, a / s, m);
    }
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    return Coeffs(sol.data(), sol.data() + k);
}

AnnulusGreen::Coeffs AnnulusGreen::solve_remainder(int degree, double s) const {
    const int n = spec_.n(), k = spec_.k();
    const double a = domain_.inner(), b = domain_.outer();
    const std::vector<double> e = indicial_exponents(degree, spec_);
    const Coeffs hb = solve_ball_image(degree, s);
    const Coeffs he = solve_hole_image(degree, s);
    // basis (r/b)^{e_j} for growing j < k, (r/a)^{e_j} for decaying j >= k
    auto basis = [&](int i, double r) {
        return std::pow(r / (i < k ? b : a), e[static_cast<std::size_t>(i)]);
    };
    Eigen::MatrixXd A(2 * k, 2 * k);
    Eigen::VectorXd rhs(2 * k);
    for (int m = 0; m < k; ++m) {
        const double sc = row_scale(degree, n, m);
        for (int i = 0; i < 2 * k; ++i) {
            const double ff = falling_factorial(e[static_cast<std::size_t>(i)], m);
            A(m, i) = sc * ff * basis(i, a);
            A(k + m, i) = sc * ff * basis(i, b);
        }
        // the ball image does not vanish on |y| = a, nor the hole image on |y| = b
        double hb_a = 0.0, he_b = 0.0;
        for (int j = 0; j < k; ++j) {
            hb_a += hb[static_cast<std::size_t>(j)] * falling_factorial(e[static_cast<std::size_t>(j)], m) * basis(j, a);
            he_b += he[static_cast<std::size_t>(j)] * falling_factorial(e[static_cast<std::size_t>(k + j)], m) *
                    basis(k + j, b);
        }
        rhs(m) = -sc * hb_a;
        rhs(k + m) = -sc * he_b;
    }
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    return Coeffs(sol.data(), sol.data() + 2 * k);
}

std::shared_ptr<const AnnulusGreen::Coeffs> AnnulusGreen::remainder_coeffs(int degree, double s) const {
    const Key key{degree, std::bit_cast<std::uint64_t>(s)};
    {
        std::shared_lock lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto coeffs = std::make_shared<const Coeffs>(solve_remainder(degree, s));
    std::unique_lock lock(cache_mutex_);
    if (cache_.size() >= kCacheLimit) cache_.clear();
    // first writer wins, so every reader sees one published value per key
    return cache_.try_emplace(key, std::move(coeffs)).first->second;
}

double AnnulusGreen::eval_growing(const Coeffs& c, int degree, double r) const {
    const double b = domain_.outer();
    double v = 0.0;
    for (int j = 0; j < spec_.k(); ++j) v += c[static_cast<std::size_t>(j)] * std::pow(r / b, degree + 2.0 * j);
    return v;
}

double AnnulusGreen::eval_decaying(const Coeffs& c, std::size_t offset, int degree, double r) const {
    const double a = domain_.inner();
    const int n = spec_.n();
    double v = 0.0;
    for (int j = 0; j < spec_.k(); ++j)
        v += c[offset + static_cast<std::size_t>(j)] * std::pow(r / a, 2.0 - n - degree + 2.0 * j);
    return v;
}

namespace {
void check_radii(const AnnulusDomain& d, double r, double s) {
    if (!(s > d.inner() && s < d.outer()) || r < d.inner() || r > d.outer())
        throw DomainError("radii outside the annulus");
}
}  // namespace

double AnnulusGreen::ball_image_mode(int degree, double r, double s) const {
    check_radii(domain_, r, s);
    return eval_growing(solve_ball_image(degree, s), degree, r);
}

double AnnulusGreen::hole_image_mode(int degree, double r, double s) const {
    check_radii(domain_, r, s);
    return eval_decaying(solve_hole_image(degree, s), 0, degree, r);
}

double AnnulusGreen::regular_mode(int degree, double r, double s) const {
    const Coeffs& rho = *remainder_coeffs(degree, s);
    return ball_image_mode(degree, r, s) + hole_image_mode(degree, r, s) + eval_growing(rho, degree, r) +
           eval_decaying(rho, static_cast<std::size_t>(spec_.k()), degree, r);
}

std::size_t AnnulusGreen::cache_size() const {
    std::shared_lock lock(cache_mutex_);
    return cache_.size();
}

GreenEvaluation AnnulusGreen::evaluate(const Point& x, const Point& y) const { return evaluate(x, y, options_.tol); }

GreenEvaluation AnnulusGreen::evaluate(const Point& x, const Point& y, double tol) const {
    require_dimension(x, spec_);
    require_dimension(y, spec_);
    if (!domain_.contains(x) || !domain_.contains(y))
        throw DomainError("annulus Green function evaluated outside the open annulus");
    const double dxy = distance(x, y);
    if (dxy == 0.0) throw SingularityError("annulus Green function on the diagonal");

    const int n = spec_.n();
    const std::size_t k = static_cast<std::size_t>(spec_.k());
    const double s = x.norm(), r = y.norm();
    const double t = std::clamp(dot(x, y) / (s * r), -1.0, 1.0);
    const double lambda = 0.5 * (n - 2);
    const double zonal_norm = 1.0 / ((n - 2.0) * unit_sphere_area(n));

    double sum = ball_(x, y) + exterior_(x, y) - fundamental_ * std::pow(dxy, spec_.green_exponent());
    // Gegenbauer recurrences at t and at 1 (the latter bounds |C_l(t)|)
    double c0 = 1.0, c1 = 2.0 * lambda * t;
    double u0 = 1.0, u1 = 2.0 * lambda;
    double prev_bound = 0.0, last_bound = 0.0;
    int small_run = 0;
    GreenEvaluation out;
    for (int l = 0; l < options_.mode_cap; ++l) {
        double cl, ul;
        if (l == 0) {
            cl = c0;
            ul = u0;
        } else if (l == 1) {
            cl = c1;
            ul = u1;
        } else {
            const int m = l - 1;
            cl = (2.0 * (m + lambda) * t * c1 - (m + 2.0 * lambda - 1.0) * c0) / (m + 1.0);
            ul = (2.0 * (m + lambda) * u1 - (m + 2.0 * lambda - 1.0) * u0) / (m + 1.0);
            c0 = c1;
            c1 = cl;
            u0 = u1;
            u1 = ul;
        }
        const double weight = (2.0 * l + n - 2.0) * zonal_norm;
        const Coeffs& rho = *remainder_coeffs(l, s);
        const double h = eval_growing(rho, l, r) + eval_decaying(rho, k, l, r);
        sum += h * weight * cl;
        prev_bound = last_bound;
        last_bound = std::abs(h) * weight * ul;
        out.modes_used = l + 1;
        small_run = last_bound <= tol * std::abs(sum) ? small_run + 1 : 0;
        if (small_run >= 3 && l >= 2) break;
    }
    out.value = sum;
    out.converged = small_run >= 3;
    double q = prev_bound > 0.0 ? last_bound / prev_bound : 0.0;
    q = std::min(q, 0.99);
    out.truncation_estimate = last_bound * q / (1.0 - q);
    return out;
}

double AnnulusGreen::derivative_step(const Point& x, const Point& y, int order) const {
    const double scale = std::min(distance(x, y), domain_.distance_to_boundary(y));
    return derivative_step_factor(order, 1e-3) * scale;
}

std::vector<double> AnnulusGreen::derivative(const Point& x, const Point& y, int order) const {
    const int k = spec_.k();
    if (order < 1 || order > 2 * k) throw DomainError("derivative order must lie in [1, 2k]");
    require_dimension(y, spec_);
    const double h = derivative_step(x, y, order);
    const double reach = 0.5 * order * h;
    if (!(h > 0.0) || reach >= domain_.distance_to_boundary(y) || reach >= distance(x, y))
        throw NumericalError("finite-difference stencil leaves the annulus");
    const double fd_tol = std::max(options_.tol * std::pow(h / std::max(distance(x, y), h), order), 1e-16);
    ScalarField g = [&](const Point& z) { return evaluate(x, z, fd_tol).value; };
    return derivative_tensor(g, y, order, h);
}

GreenEvaluation annulus_green(const Point& x, const Point& y, const AnnulusDomain& domain, const ProblemSpec& spec,
                              double tol) {
    AnnulusGreenOptions opt;
    opt.tol = tol;
    return AnnulusGreen(spec, domain, opt).evaluate(x, y);
}

std::vector<double> annulus_green_derivative(const Point& x, const Point& y, int order, const AnnulusDomain& domain,
                                             const ProblemSpec& spec, double tol) {
    AnnulusGreenOptions opt;
    opt.tol = tol;
    return AnnulusGreen(spec, domain, opt).derivative(x, y, order);
}

}  // namespace polygreen
