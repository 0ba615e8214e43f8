#pragma once

// Rigorous enclosure of g^{-1}, the inverse of g restricted to J, by
// monotone interval bisection against the function-ball enclosure.
//
// Given a target interval Y, two certified brackets are refined inside J:
//   a = a point with  eval(g, [a,a]).lo >= Y.hi   (g at a provably above Y)
//   b = a point with  eval(g, [b,b]).hi <= Y.lo   (g at b provably below Y)
// Since the certificate proves g strictly decreasing on J, every member of
// the ball maps a above Y and b below Y, so every y in Y has its unique
// preimage inside X = [a, b] for every member simultaneously.
//
// tol is the bisection refinement tolerance for each bracket.  The width of
// the returned X additionally carries the enclosure floor: a point
// evaluation of the ball has width about 2*radius, so certified brackets
// cannot approach the true preimage closer than roughly radius/|g'|
// regardless of tol.  Requesting tol below that floor is permitted and
// simply stops improving the result; ToleranceUnreachable is reserved for
// tolerances the bisection provably cannot reach (non-positive, or below
// the spacing of doubles inside J).  When even an endpoint of J cannot be
// certified on one side, that endpoint itself is returned on that side,
// which is sound because g^{-1} means the inverse of the restriction to J.

#include "feigdim/function_ball.hpp"
#include "feigdim/interval.hpp"
#include "feigdim/monotonicity.hpp"

namespace feigdim {

// Query escapes the range of g on J beyond enclosure slack, or is too wide
// to invert meaningfully (width > width(g(J))/4 indicates an upstream bug).
class RangeError : public Error {
    using Error::Error;
};

class ToleranceUnreachable : public Error {
    using Error::Error;
};

// The derivative enclosure over the inverted interval straddles zero.  Under
// a valid certificate this cannot happen; it signals certificate misuse.
class DerivativeContainsZero : public Error {
    using Error::Error;
};

struct InverseQuery {
    Interval Y;          // target values, within g(J) up to slack
    double tol = 1e-14;  // bracket refinement tolerance
};

// Bisection step counts of the two bracket refinements, for termination
// property tests.
struct InverseStats {
    int iterations_above = 0;
    int iterations_below = 0;
};

// X = [a, b] as described above.  Requires cert.gprime_negative.
Interval invert(const FunctionBall& ball, const MonotonicityCertificate& cert,
                const InverseQuery& q, InverseStats* stats = nullptr);

// Enclosure of (g^{-1})'(y) for every y in Y: 1 / eval_deriv(ball, invert(Y))
// with outward rounding.  Always negative under a valid certificate.
Interval inverse_deriv(const FunctionBall& ball, const MonotonicityCertificate& cert,
                       const InverseQuery& q);

}  // namespace feigdim
