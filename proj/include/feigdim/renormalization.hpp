#pragma once

// Period-doubling renormalization acting on even unimodal maps with a
// degree-d critical point at the origin.  Maps are represented by the
// coefficients of G in g(x) = G(u), u = (|x|/rho)^d, the same
// parametrization FunctionBall uses, so Newton output drops straight into a
// ball without rescaling.
//
// The operator is (R g)(x) = alpha * g(g(s * x)) with alpha = 1/g(1) and the
// inner scale s = alpha^{-1} for even d, s = -alpha^{-1} for odd d.  Because
// g is even, only |s| enters the coefficient-level composition; the signed
// value is still exposed (signed_inner_scale) so the parity convention stays
// observable.  In u-space the composition is a truncated power-series
// substitution: with lam = |alpha^{-1}|^d,
//
//   Z(u) = G(lam * u),   W(u) = Z(u)^d / rho^d,   (R g) ~ G(W(u)) / g(1).
//
// Multiplying power series never lowers degrees, so truncating every
// intermediate at N yields exactly the first N+1 coefficients of the full
// composition; the discarded tail is measured separately (truncated_tail_mass)
// and must stay well below the ball radius for a ball to be accepted.

#include <string>
#include <vector>

#include "feigdim/function_ball.hpp"
#include "feigdim/interval.hpp"

namespace feigdim {

class NoConvergence : public Error {
  public:
    NoConvergence(const std::string& what, double best_residual_)
        : Error(what), best_residual(best_residual_) {}
    double best_residual;
};

class SingularAlpha : public Error {
    using Error::Error;
};

class CompositionDivergence : public Error {
    using Error::Error;
};

struct RenormConfig {
    int degree_d = 2;
    int truncation_N = 20;
    double rho = 1.25;
    double newton_tol = 1e-11;
    int max_iters = 60;
    std::vector<double> seed_coeffs;  // empty: built-in seed for degree_d

    void require_valid() const;
};

// Defaults tuned per degree: the coefficient decay ratio (rho/r)^d, r the
// convergence radius of the fixed point, sets how large N must be before the
// discarded tail drops below radius/10.
RenormConfig default_renorm_config(int degree_d);

struct RenormConstants {
    Interval alpha;      // 1/g(1), outward rounded
    Interval alpha_inv;  // g(1) evaluated directly (no double reciprocal)
    int degree_d = 0;
};

struct NewtonResult {
    std::vector<double> coeffs;  // c_0..c_N, c_0 == 1
    double residual_l1 = 0.0;
    std::vector<double> residual_history;  // l1 residual after each accepted step
    int iterations = 0;
};

// One application of the renormalization operator to a coefficient vector,
// alpha recomputed from the operand, result truncated to cfg.truncation_N.
std::vector<double> apply_R(const std::vector<double>& coeffs, const RenormConfig& cfg);

// Same composition carried out in interval arithmetic on point-interval
// coefficients.  full_length keeps every coefficient of the composition
// instead of truncating, which is what the tail measurement consumes.
std::vector<Interval> apply_R_enclosure(const std::vector<Interval>& coeffs,
                                        const RenormConfig& cfg, bool full_length);

// The signed inner rescaling factor s (see header comment): g(1) for even d,
// -g(1) for odd d.
double signed_inner_scale(const std::vector<double>& coeffs, const RenormConfig& cfg);

// Damped Newton on c_1..c_N (c_0 pinned to 1), forward-difference Jacobian,
// with continuation from lower truncations when the direct solve stalls.
// Plain floating point; rigor enters downstream through interval evaluation
// of the resulting ball.
NewtonResult newton_fixpoint(const RenormConfig& cfg);

// Scaling constants of a ball: alpha = 1/eval(ball, [1,1]).
// Throws SingularAlpha if the enclosure of g(1) contains zero.
RenormConstants alpha_of(const FunctionBall& ball);

// l1 norm of apply_R(center) - center over the retained coefficients.
// Informational only; never feeds a rigorous bound.
double residual_diagnostic(const FunctionBall& ball);

// Rigorous upper bound on the l1 mass of the composition coefficients beyond
// truncation_N when R is applied to the ball center.
double truncated_tail_mass(const FunctionBall& ball);

// Newton solve + interval wrap + diagnostics, producing a ball that carries
// the fixed-point center with the given radius hypothesis.  The radius itself
// is an assumption recorded in provenance (assumed_rigorous), guarded by the
// requirement truncated_tail_mass <= radius/10.
FunctionBall build_fixed_point_ball(const RenormConfig& cfg, double radius);

}  // namespace feigdim
