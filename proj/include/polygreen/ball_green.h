#pragma once

#include "polygreen/geometry.h"

namespace polygreen {

/// Constant c_{n,k} of the fundamental solution c_{n,k} |x|^{2k-n} of
/// (-Delta)^k. Starts from the Laplace constant 1/((n-2) n e_n) and uses
/// -Delta |x|^m = -m (m+n-2) |x|^{m-2} to climb in k.
double fundamental_constant(const ProblemSpec& spec);

/// c_{n,k} |x - y|^{2k-n}.
double fundamental_solution(const Point& x, const Point& y, const ProblemSpec& spec);

/// A(x,y) = sqrt(|x|^2 |y|^2 - 2 x.y + 1) / |x - y| for x, y in the closed
/// unit ball. A >= 1, with equality iff x or y is on the unit sphere.
double boggio_auxiliary(const Point& x, const Point& y);

/// int_1^z (v^2 - 1)^{k-1} v^{1-n} dv.
///
/// Closed form by binomial expansion; n > 2k keeps every power of v away
/// from -1, so there are no logarithms. Close to z = 1 the alternating sum
/// cancels, and a Gauss-Legendre rule on [1, z] is used instead.
double boggio_profile(double z, const ProblemSpec& spec);

/// Limit of boggio_profile as z -> infinity.
double boggio_profile_limit(const ProblemSpec& spec);

/// Boggio's Green function of (-Delta)^k on a ball.
///
/// On the unit ball G(x,y) = K |x-y|^{2k-n} P(A(x,y)) with P the profile
/// above. K is chosen so that G - c_{n,k}|x-y|^{2k-n} stays bounded on the
/// diagonal: K = c_{n,k} / P(infinity). For a ball B_R(c),
/// G(x,y) = R^{2k-n} G_1((x-c)/R, (y-c)/R).
class BoggioKernel {
public:
    BoggioKernel(ProblemSpec spec, BallDomain ball);

    const ProblemSpec& spec() const noexcept { return spec_; }
    const BallDomain& ball() const noexcept { return ball_; }
    double normalization() const noexcept { return normalization_; }

    /// Throws SingularityError for x == y and DomainError outside the closed ball.
    double operator()(const Point& x, const Point& y) const;

private:
    ProblemSpec spec_;
    BallDomain ball_;
    double normalization_;
};

double ball_green(const Point& x, const Point& y, const BoggioKernel& kernel);

}  // namespace polygreen
