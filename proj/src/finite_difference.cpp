#include "polygreen/finite_difference.h"

#include "polygreen/errors.h"

#include <algorithm>
#include <cmath>

namespace polygreen {

namespace {

void enumerate(int n, int remaining, int pos, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (pos == n - 1) {
        cur[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(pos)] = e;
        enumerate(n, remaining - e, pos + 1, cur, out);
    }
}

double binomial(int m, int i) {
    double c = 1.0;
    for (int j = 1; j <= i; ++j) c = c * (m - i + j) / j;
    return c;
}

// Plain tensor central difference without extrapolation.
double central(const ScalarField& f, const Point& y, const std::vector<int>& alpha, double h) {
    const int n = y.dim();
    std::vector<int> axes;
    for (int i = 0; i < n; ++i)
        if (alpha[static_cast<std::size_t>(i)] > 0) axes.push_back(i);
    if (axes.empty()) return f(y);

    // odometer over stencil indices i_j in [0, m_j]
    std::vector<int> idx(axes.size(), 0);
    double sum = 0.0;
    Point z = y;
    for (;;) {
        double coeff = 1.0;
        for (std::size_t j = 0; j < axes.size(); ++j) {
            const int m = alpha[static_cast<std::size_t>(axes[j])];
            const int i = idx[j];
            coeff *= ((i % 2) ? -1.0 : 1.0) * binomial(m, i);
            z[axes[j]] = y[axes[j]] + (0.5 * m - i) * h;
        }
        sum += coeff * f(z);
        std::size_t j = 0;
        while (j < axes.size()) {
            if (++idx[j] <= alpha[static_cast<std::size_t>(axes[j])]) break;
            idx[j] = 0;
            ++j;
        }
        if (j == axes.size()) break;
    }
    int order = 0;
    for (int a : alpha) order += a;
    return sum / std::pow(h, order);
}

}  // namespace

std::vector<std::vector<int>> multi_indices(int n, int order) {
    if (n < 1 || order < 0) throw DomainError("multi_indices: invalid arguments");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    enumerate(n, order, 0, cur, out);
    return out;
}

double stencil_half_width(const std::vector<int>& alpha) {
    double s = 0.0;
    for (int a : alpha) s += 0.25 * a * a;
    return std::sqrt(s);
}

double partial_derivative(const ScalarField& f, const Point& y, const std::vector<int>& alpha, double h) {
    if (static_cast<int>(alpha.size()) != y.dim()) throw DomainError("multi-index length mismatch");
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    const double coarse = central(f, y, alpha, h);
    const double fine = central(f, y, alpha, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> derivative_tensor(const ScalarField& f, const Point& y, int order, double h) {
    std::vector<double> out;
    for (const auto& alpha : multi_indices(y.dim(), order)) out.push_back(partial_derivative(f, y, alpha, h));
    return out;
}

double derivative_step_factor(int order, double base) {
    return std::max(base, std::pow(1e-14, 1.0 / (order + 4)));
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace polygreen
