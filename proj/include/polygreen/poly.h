#pragma once

#include "polygreen/geometry.h"

#include <map>
#include <vector>

namespace polygreen {

/// Sparse multivariate polynomial in n variables with double coefficients.
/// Zero coefficients are never stored. Used to produce exact right-hand
/// sides (-Delta)^k u for manufactured solutions.
class Polynomial {
public:
    using MultiIndex = std::vector<int>;

    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, double c);
    /// The coordinate y_i.
    static Polynomial variable(int nvars, int i);
    /// |y|^2 = sum y_i^2.
    static Polynomial norm_squared(int nvars);

    int nvars() const noexcept { return nvars_; }
    const std::map<MultiIndex, double>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree() const noexcept;

    /// Adds c * y^alpha.
    void add_term(const MultiIndex& alpha, double c);
    double coefficient(const MultiIndex& alpha) const;

    double operator()(const Point& y) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(double s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    Polynomial pow(int m) const;
    Polynomial derivative(int i) const;

private:
    int nvars_;
    std::map<MultiIndex, double> terms_;
};

/// Sum of second derivatives.
Polynomial laplacian(const Polynomial& p);

/// (-1)^k Delta^k p.
Polynomial polyharmonic(const Polynomial& p, int k);

}  // namespace polygreen
