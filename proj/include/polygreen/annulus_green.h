#pragma once

#include "polygreen/ball_green.h"
#include "polygreen/exterior_green.h"
#include "polygreen/geometry.h"

#include <array>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace polygreen {

/// Powers r^gamma solving the degree-l radial mode equation of (-Delta)^k:
/// the k growing exponents l, l+2, ..., l+2(k-1) followed by the k decaying
/// exponents 2-n-l, 4-n-l, ..., 2k-n-l. The two chains never meet when
/// n > 2k, so all 2k values are distinct and no r^gamma log r terms occur.
std::vector<double> indicial_exponents(int degree, const ProblemSpec& spec);

/// Falling factorial gamma (gamma-1) ... (gamma-m+1); r^m d^m/dr^m r^gamma = ff * r^gamma.
double falling_factorial(double gamma, int m);

/// Degree-l radial Green kernel g_l(., s) on a < r < b.
///
/// Coefficients multiply the scaled basis (r/R_i)^{gamma_i}, where R_i is
/// the endpoint of the region on which that power is largest; every basis
/// value is therefore <= 1 on its region and large degrees neither overflow
/// nor underflow into garbage.
struct ModalGreenKernel {
    int degree = 0;
    double source_radius = 0.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    std::vector<double> exponents;      // 2k
    std::vector<double> inner_coeffs;   // valid on (a, s)
    std::vector<double> outer_coeffs;   // valid on (s, b)
    double residual = 0.0;              // |Ax - rhs|_inf of the interface system
    double condition_estimate = 0.0;    // 2-norm condition number of the scaled system

    /// m-th radial derivative at r; r == s uses the outer branch.
    double derivative(double r, int m) const;
    double value(double r) const { return derivative(r, 0); }
    /// m-th derivative from the inner branch (for jump checks at s).
    double inner_derivative(double r, int m) const;
    double outer_derivative(double r, int m) const;
};

/// Solves the 4k x 4k interface system: k Dirichlet rows at a and at b,
/// continuity of derivatives 0..2k-2 at s, and the jump
/// g^{(2k-1)}(s+) - g^{(2k-1)}(s-) = (-1)^k / s^{n-1}.
/// Throws NumericalError (carrying the condition estimate) if singular.
ModalGreenKernel modal_solve(int degree, double source_radius, const AnnulusDomain& domain, const ProblemSpec& spec);

/// Gegenbauer polynomial C_l^lambda(t) by the three-term recurrence.
double gegenbauer(int degree, double lambda, double t);

/// Reproducing kernel of degree-l spherical harmonics on S^{n-1}:
/// Z_l(t) = (2l+n-2) / ((n-2) |S^{n-1}|) * C_l^{(n-2)/2}(t).
double zonal_harmonic(int degree, double t, const ProblemSpec& spec);

struct GreenEvaluation {
    double value = 0.0;
    double truncation_estimate = 0.0;
    int modes_used = 0;
    bool converged = true;  // false when the mode cap was hit first
};

/// l_max cap: POLYGREEN_LMAX if set, otherwise 400.
int default_mode_cap();

struct AnnulusGreenOptions {
    double tol = 1e-10;
    int mode_cap = default_mode_cap();
};

/// Dirichlet Green function of (-Delta)^k on the annulus a < |y| < b.
///
/// Mode l of G is g_l = gamma_l + hb_l + he_l + rho_l: the free-space mode,
/// the correction making gamma_l vanish on |y| = b alone (growing powers),
/// the correction for |y| = a alone (decaying powers), and the remaining
/// multiple-reflection part. The first three sum in closed form to
///   G_ball(x,y) + G_ext(x,y) - Gamma(x,y)
/// (Boggio on B_b, the inverted kernel on the exterior of B_a, fundamental
/// solution), so
///   G(x,y) = G_ball + G_ext - Gamma + sum_l rho_l(|y|; |x|) Z_l(x^.y^).
/// The rho series converges at least like (a/b)^l, including on the
/// diagonal and next to either sphere. rho coefficients are cached per
/// (l, |x|); the object is safe to share between threads.
class AnnulusGreen {
public:
    AnnulusGreen(ProblemSpec spec, AnnulusDomain domain, AnnulusGreenOptions options = {});

    const ProblemSpec& spec() const noexcept { return spec_; }
    const AnnulusDomain& domain() const noexcept { return domain_; }
    const AnnulusGreenOptions& options() const noexcept { return options_; }

    GreenEvaluation evaluate(const Point& x, const Point& y) const;
    GreenEvaluation evaluate(const Point& x, const Point& y, double tol) const;
    double operator()(const Point& x, const Point& y) const { return evaluate(x, y).value; }

    /// All order-r partials in y (ordered as multi_indices(n, r)) by nested
    /// central differences with one Richardson level. Throws NumericalError
    /// when the stencil would leave the annulus.
    std::vector<double> derivative(const Point& x, const Point& y, int order) const;
    /// Step used by derivative() at (x, y).
    double derivative_step(const Point& x, const Point& y, int order) const;

    /// Free-space mode gamma_l(r, s) of the fundamental solution.
    double free_space_mode(int degree, double r, double s) const;
    /// Regular part h_l(r; s) = g_l(r, s) - gamma_l(r, s) = hb_l + he_l + rho_l.
    double regular_mode(int degree, double r, double s) const;
    /// hb_l(r; s): gamma_l + hb_l is the degree-l mode of Boggio's kernel on B_b.
    double ball_image_mode(int degree, double r, double s) const;
    /// he_l(r; s): gamma_l + he_l is the degree-l mode of the exterior kernel of B_a.
    double hole_image_mode(int degree, double r, double s) const;

    std::size_t cache_size() const;

private:
    struct FreeSpaceMode {
        std::vector<double> inner;  // coefficients of (r/s)^{l+2j}, s = 1
        std::vector<double> outer;  // coefficients of (r/s)^{2-n-l+2j}
    };
    using Coeffs = std::vector<double>;

    const FreeSpaceMode& free_space(int degree) const;
    // k coefficients of (r/b)^{l+2j}
    Coeffs solve_ball_image(int degree, double s) const;
    // k coefficients of (r/a)^{2-n-l+2j}
    Coeffs solve_hole_image(int degree, double s) const;
    // 2k coefficients: growing then decaying
    Coeffs solve_remainder(int degree, double s) const;
    std::shared_ptr<const Coeffs> remainder_coeffs(int degree, double s) const;
    double eval_growing(const Coeffs& c, int degree, double r) const;
    double eval_decaying(const Coeffs& c, std::size_t offset, int degree, double r) const;

    ProblemSpec spec_;
    AnnulusDomain domain_;
    AnnulusGreenOptions options_;
    double fundamental_;
    BoggioKernel ball_;
    ExteriorKernel exterior_;
    std::vector<FreeSpaceMode> free_space_;  // index = degree, up to mode_cap

    struct Key {
        int degree;
        std::uint64_t source_bits;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return std::hash<std::uint64_t>{}(k.source_bits * 1000003u + static_cast<std::uint64_t>(k.degree));
        }
    };
    mutable std::shared_mutex cache_mutex_;
    mutable std::unordered_map<Key, std::shared_ptr<const Coeffs>, KeyHash> cache_;
};

/// One-shot evaluation (constructs an evaluator; prefer AnnulusGreen for repeated use).
GreenEvaluation annulus_green(const Point& x, const Point& y, const AnnulusDomain& domain, const ProblemSpec& spec,
                              double tol = 1e-10);

std::vector<double> annulus_green_derivative(const Point& x, const Point& y, int order, const AnnulusDomain& domain,
                                             const ProblemSpec& spec, double tol = 1e-10);

}  // namespace polygreen
