#include "polygreen/poly.h"

#include "polygreen/errors.h"

#include <numeric>

namespace polygreen {

namespace {
void check_vars(const Polynomial& a, const Polynomial& b) {
    if (a.nvars() != b.nvars()) throw DomainError("polynomials in different numbers of variables");
}
}  // namespace

Polynomial Polynomial::constant(int nvars, double c) {
    Polynomial p(nvars);
    p.add_term(MultiIndex(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
    Polynomial p(nvars);
    MultiIndex a(static_cast<std::size_t>(nvars), 0);
    a[static_cast<std::size_t>(i)] = 1;
    p.add_term(a, 1.0);
    return p;
}

Polynomial Polynomial::norm_squared(int nvars) {
    Polynomial p(nvars);
    for (int i = 0; i < nvars; ++i) {
        MultiIndex a(static_cast<std::size_t>(nvars), 0);
        a[static_cast<std::size_t>(i)] = 2;
        p.add_term(a, 1.0);
    }
    return p;
}

int Polynomial::degree() const noexcept {
    int d = 0;
    for (const auto& [alpha, c] : terms_) d = std::max(d, std::accumulate(alpha.begin(), alpha.end(), 0));
    return d;
}

void Polynomial::add_term(const MultiIndex& alpha, double c) {
    if (static_cast<int>(alpha.size()) != nvars_) throw DomainError("multi-index length mismatch");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Polynomial::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(const Point& y) const {
    if (y.dim() != nvars_) throw DomainError("polynomial evaluated at a point of wrong dimension");
    // powers[i][e] = y_i^e
    const int deg = degree();
    std::vector<std::vector<double>> powers(static_cast<std::size_t>(nvars_),
                                            std::vector<double>(static_cast<std::size_t>(deg + 1), 1.0));
    for (int i = 0; i < nvars_; ++i)
        for (int e = 1; e <= deg; ++e) powers[i][e] = powers[i][e - 1] * y[i];
    double s = 0.0;
    for (const auto& [alpha, c] : terms_) {
        double t = c;
        for (int i = 0; i < nvars_; ++i) t *= powers[i][alpha[i]];
        s += t;
    }
    return s;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    check_vars(*this, o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    check_vars(*this, o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [alpha, c] : terms_) c *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_vars(a, b);
    Polynomial out(a.nvars());
    Polynomial::MultiIndex m(static_cast<std::size_t>(a.nvars()));
    for (const auto& [alpha, ca] : a.terms_)
        for (const auto& [beta, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = alpha[i] + beta[i];
            out.add_term(m, ca * cb);
        }
    return out;
}

Polynomial Polynomial::pow(int m) const {
    if (m < 0) throw DomainError("negative polynomial power");
    Polynomial result = constant(nvars_, 1.0);
    Polynomial base = *this;
    while (m > 0) {
        if (m & 1) result = result * base;
        m >>= 1;
        if (m > 0) base = base * base;
    }
    return result;
}

Polynomial Polynomial::derivative(int i) const {
    Polynomial out(nvars_);
    for (const auto& [alpha, c] : terms_) {
        const int e = alpha[static_cast<std::size_t>(i)];
        if (e == 0) continue;
        MultiIndex beta = alpha;
        beta[static_cast<std::size_t>(i)] = e - 1;
        out.add_term(beta, c * e);
    }
    return out;
}

Polynomial laplacian(const Polynomial& p) {
    Polynomial out(p.nvars());
    for (const auto& [alpha, c] : p.terms()) {
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const int e = alpha[i];
            if (e < 2) continue;
            Polynomial::MultiIndex beta = alpha;
            beta[i] = e - 2;
            out.add_term(beta, c * e * (e - 1));
        }
    }
    return out;
}

Polynomial polyharmonic(const Polynomial& p, int k) {
    if (k < 1) throw DomainError("polyharmonic order must be >= 1");
    Polynomial out = p;
    for (int j = 0; j < k; ++j) out = laplacian(out);
    if (k % 2 == 1) out *= -1.0;
    return out;
}

}  // namespace polygreen
