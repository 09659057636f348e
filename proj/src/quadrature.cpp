#include "polygreen/quadrature.h"

#include "polygreen/errors.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polygreen {

GaussRule gauss_legendre(int m) {
    if (m < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (m == 1) p0 = 1.0;
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= m; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        if (m == 1) p0 = 1.0;
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
    }
    return rule;
}

AxisymmetricShellQuadrature::AxisymmetricShellQuadrature(int n, double inner, double outer, double pole)
    : n_(n), inner_(inner), outer_(outer), pole_(pole) {
    if (n < 2) throw DomainError("shell quadrature needs n >= 2");
    if (!(inner >= 0.0) || !(inner < outer)) throw DomainError("shell quadrature needs 0 <= inner < outer");
    if (!(pole >= 0.0) || !(pole < outer) || (inner > 0.0 && !(pole > inner)))
        throw DomainError("quadrature pole must lie inside the shell");
}

double AxisymmetricShellQuadrature::integrate(const std::function<double(const Point&)>& f, int radial,
                                              int angular) const {
    const GaussRule rr = gauss_legendre(radial);
    const GaussRule ra = gauss_legendre(angular);
    const double t = pole_;
    const double b2 = outer_ * outer_;
    // area of S^{n-2}
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * (n_ - 1)) / std::tgamma(0.5 * (n_ - 1));

    Point y(n_);
    // integral of f over rho in [lo, hi] along the ray with direction angle phi, weight rho^{n-1}
    auto ray = [&](double cphi, double sphi, double lo, double hi) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        double s = 0.0;
        for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
            const double rho = mid + half * rr.nodes[i];
            y[0] = t + rho * cphi;
            y[1] = rho * sphi;
            s += rr.weights[i] * std::pow(rho, n_ - 1) * f(y);
        }
        return s * half;
    };
    auto outer_exit = [&](double cphi, double sphi) {
        return -t * cphi + std::sqrt(std::max(0.0, b2 - t * t * sphi * sphi));
    };

    const bool hole = inner_ > 0.0;
    const double phi_k = hole ? std::numbers::pi - std::asin(inner_ / t) : std::numbers::pi;

    double total = 0.0;
    // polar angles that miss the hole
    {
        const double half = 0.5 * phi_k;
        for (std::size_t j = 0; j < ra.nodes.size(); ++j) {
            const double phi = half * (1.0 + ra.nodes[j]);
            const double c = std::cos(phi), s = std::sin(phi);
            total += ra.weights[j] * half * std::pow(s, n_ - 2) * ray(c, s, 0.0, outer_exit(c, s));
        }
    }
    // rays crossing the hole: psi = pi - phi, sin(psi) = (a/t) sin(tau), tau in [0, pi/2]
    if (hole) {
        const double ratio = inner_ / t;
        const double half = 0.25 * std::numbers::pi;
        for (std::size_t j = 0; j < ra.nodes.size(); ++j) {
            const double tau = half * (1.0 + ra.nodes[j]);
            const double spsi = ratio * std::sin(tau);
            const double cpsi = std::sqrt(1.0 - spsi * spsi);
            const double chord = inner_ * std::cos(tau);
            const double dpsi = ratio * std::cos(tau) / cpsi;
            const double c = -cpsi, s = spsi;
            const double rho1 = t * cpsi - chord, rho2 = t * cpsi + chord;
            const double along = ray(c, s, 0.0, rho1) + ray(c, s, rho2, outer_exit(c, s));
            total += ra.weights[j] * half * dpsi * std::pow(s, n_ - 2) * along;
        }
    }
    return sphere * total;
}

AxisymmetricShellQuadrature::Result AxisymmetricShellQuadrature::integrate_converged(
    const std::function<double(const Point&)>& f, double rel_tol, int start, int max_nodes) const {
    int m = start;
    double prev = integrate(f, m, m);
    double change = 0.0;
    while (2 * m <= max_nodes) {
        m *= 2;
        const double cur = integrate(f, m, m);
        change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
        prev = cur;
        if (change < rel_tol) return {cur, change, m, true};
    }
    return {prev, change, m, false};
}

}  // namespace polygreen
