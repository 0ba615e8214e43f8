#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "feigdim/interval.hpp"

// A function ball: polynomial center in the variable u = (|x|/rho)^d with
// interval coefficients, plus an l1 radius in coefficient space. The ball
// contains every even function f(x) = sum_k a_k u^k (sum over all k >= 0)
// whose coefficient distance from the center, sum_k |a_k - c_k|, is at most
// `radius`; truncated tail coefficients count toward the distance, so the
// representation absorbs them. Since |u| <= 1 on the evaluation domain, the
// value discrepancy at any point is at most `radius`.
//
// Derivatives of an l1 ball are unbounded in coefficient space, so eval_deriv
// and eval_second_deriv use pointwise tail factors instead: with t = |x|/rho,
//   sup_ball |f'(x)  - center'(x)|  <= radius * (d/rho)   * M1(t)
//   sup_ball |f''(x) - center''(x)| <= radius * (1/rho^2) * M2(t)
// where M1(t) = max_{k>=1} k t^(dk-1) and M2(t) = max_{k>=1} (dk)(dk-1) t^(dk-2),
// both finite for t < 1 and computed by scanning the unimodal term sequence
// with outward rounding until the term ratio drops below one.

namespace feigdim {

struct ParseError : Error {
    using Error::Error;
};

struct ChecksumMismatch : Error {
    using Error::Error;
};

// Evaluation point beyond rho * t_max.
struct DomainExceeded : DomainError {
    using DomainError::DomainError;
};

struct BallProvenance {
    std::string source = "unspecified";  // newton_computed | loaded_from_file | synthetic
    double residual_l1 = 0.0;            // informational, not part of the rigor chain
    bool assumed_rigorous = false;       // radius supplied as a trusted hypothesis
};

struct FunctionBall {
    int degree_d = 2;
    double rho = 1.25;
    double radius = 0.0;
    int truncation_N = 20;         // highest u-power; coeffs has truncation_N + 1 entries
    std::vector<Interval> coeffs;  // c_0 .. c_N against u = (|x|/rho)^d
    double t_max = 0.999;          // |x| <= rho * t_max is the evaluation domain
    BallProvenance provenance;
};

// Enclosure of { f(x) : f in ball, x in X }. Throws DomainExceeded if X
// leaves [-rho*t_max, rho*t_max].
Interval eval(const FunctionBall& g, const Interval& x);

// Enclosures of the first and second derivative over the ball. The center
// is an even function, so f'(-x) = -f'(x) and f''(-x) = f''(x); arguments
// straddling zero are split at zero and the images hulled.
Interval eval_deriv(const FunctionBall& g, const Interval& x);
Interval eval_second_deriv(const FunctionBall& g, const Interval& x);

// Both sides of the derivative identity g'(x) = g'(g(a x)) g'(a x) with
// a = alpha_inv; a consistency diagnostic, the caller intersects the pair.
std::pair<Interval, Interval> deriv_identity_check(const FunctionBall& g,
                                                   const Interval& alpha_inv,
                                                   const Interval& x);

// Structured text serialization; header fields plus one hex-float coefficient
// pair per line, bit-exact round trip, FNV-1a checksum over the payload.
void save_ball(const FunctionBall& g, const std::string& path);
FunctionBall load_ball(const std::string& path);

// Checksum of the canonical serialization (what save_ball would write).
std::string ball_checksum(const FunctionBall& g);

// Upper bounds of the derivative tail maxima, exposed for tests:
// M1 = max_{k>=1} k t^(dk-1), M2 = max_{k>=1} (dk)(dk-1) t^(dk-2), t in [0,1).
double deriv_tail_factor_m1(double t_hi, int d);
double deriv_tail_factor_m2(double t_hi, int d);

}  // namespace feigdim
