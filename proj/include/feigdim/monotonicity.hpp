#pragma once

// Machine-checked sign certificates on J = [g(g(1)), 1].
//
// The dimension computation evaluates contraction factors only at interval
// endpoints; that shortcut is sound only when the relevant derivative is
// monotone, which in turn follows from g' < 0 and g'' < 0 on J.  This module
// proves both inequalities by adaptive interval bisection: an enclosure of
// the derivative is computed on a subinterval, negative enclosures become
// certified leaves, straddling enclosures are split and recursed (left half
// first) until a depth cap.  The resulting certificate is a serializable
// artifact tied to its ball by checksum, so downstream stages can refuse to
// run against a ball the certificate was not computed for.
//
// The same enclosure code paths drive figure output (emit_cover_rectangles):
// the plotted rectangles are the certification covers, not separate math.

#include <string>
#include <vector>

#include "feigdim/function_ball.hpp"
#include "feigdim/interval.hpp"

namespace feigdim {

// Raised when the depth cap is reached before the sign of the target could
// be decided on some subinterval; carries the offending subinterval.
class Inconclusive : public Error {
  public:
    Inconclusive(const std::string& what, const Interval& sub)
        : Error(what), subinterval(sub) {}
    Interval subinterval;
};

// Raised when the target is provably positive somewhere: the negativity
// claim is false, no amount of refinement will help.
class PositiveSignWitness : public Error {
  public:
    PositiveSignWitness(const std::string& what, const Interval& sub, const Interval& enc)
        : Error(what), subinterval(sub), enclosure(enc) {}
    Interval subinterval;
    Interval enclosure;
};

enum class SignTarget { gprime, gsecond };

// One certified leaf: a subinterval and the (strictly negative) enclosure of
// the target derivative over it.
struct SignLeaf {
    Interval x;
    Interval enclosure;
};

// Output of one verify_sign_on call.  Leaves are adjacent and ascending:
// leaves[i].x.hi == leaves[i+1].x.lo exactly, and their union is the input
// interval, so coverage is checkable by endpoint bookkeeping alone.
struct SignCover {
    SignTarget target = SignTarget::gprime;
    std::vector<SignLeaf> leaves;
    int max_depth_used = 0;
};

struct MonotonicityCertificate {
    int degree_d = 0;
    Interval J;  // enclosure of [g(g(1)), 1]; upper endpoint exactly 1
    bool gprime_negative = false;
    bool gsecond_negative = false;
    std::vector<SignLeaf> cover;  // the g'' leaves (the delicate sign)
    int max_depth_used = 0;
    double min_abs_gprime = 0.0;  // proven: |g'| >= this everywhere on J
    std::string ball_checksum;
};

// J = hull(g(g(1)), 1) with outward rounding.  Also replays the identity
// alpha * g(J) = [alpha^{-1}, 1] with a chunked range enclosure and throws
// Error if the identity fails beyond enclosure slack.
Interval compute_J(const FunctionBall& ball);

// Adaptive negativity proof of g' or g'' on K.  Throws Inconclusive or
// PositiveSignWitness; DomainExceeded propagates if K leaves the ball domain.
SignCover verify_sign_on(SignTarget f, const FunctionBall& ball, const Interval& K,
                         int max_depth);

// Forward orbit of the critical point: points[0] = [0,0], points[k+1] =
// eval(ball, points[k]).  Widths grow with each iterate; DomainExceeded is
// thrown when an enclosure escapes the evaluation domain.
struct OrbitEnclosure {
    std::vector<Interval> points;
};
OrbitEnclosure orbit_enclosures(const FunctionBall& ball, int count);

// Depth caps that certify the default balls: the quartic g'' needs locally
// much finer covers than the other degrees.
int default_max_depth(int degree_d);

// compute_J + both sign proofs + the |g'| floor, assembled and stamped with
// the ball checksum.
MonotonicityCertificate build_certificate(const FunctionBall& ball, int max_depth_gprime,
                                          int max_depth_gsecond);

// JSON serialization; doubles stored as hexfloat strings so round trips are
// bit-exact.  load_certificate re-validates the structural invariants
// (adjacent leaves covering J, negative enclosures behind the booleans) and
// throws ParseError on any violation.
void save_certificate(const MonotonicityCertificate& cert, const std::string& path);
MonotonicityCertificate load_certificate(const std::string& path);

// Figure data: rigorous rectangle covers of the graphs of g, its derivatives
// and the two IFS maps, one rectangle per grid cell of the relevant domain
// (J for the derivative signs, I = [alpha^{-1}, 1] otherwise).
enum class CoverTag { g, gprime, gsecond, psi0, psi1, psi0deriv, psi1deriv };
const char* cover_tag_name(CoverTag t);
struct CoverRectangle {
    Interval x;
    Interval y;
};
std::vector<CoverRectangle> emit_cover_rectangles(const FunctionBall& ball, CoverTag which,
                                                  int grid);

}  // namespace feigdim
