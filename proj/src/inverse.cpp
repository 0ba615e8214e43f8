#include "feigdim/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace feigdim {

namespace {

Interval point_val(const FunctionBall& ball, double x) { return eval(ball, Interval(x, x)); }

int iteration_cap(double j_width, double tol) {
    double steps = std::ceil(std::log2(std::max(j_width, 1e-300) / tol));
    if (steps < 0.0) steps = 0.0;
    if (steps > 200.0) steps = 200.0;  // gap halving hits double spacing long before this
    return static_cast<int>(steps) + 5;
}

}  // namespace

Interval invert(const FunctionBall& ball, const MonotonicityCertificate& cert,
                const InverseQuery& q, InverseStats* stats) {
    if (!cert.gprime_negative)
        throw Error("invert: certificate does not establish that g decreases on J");
    if (!(q.tol > 0.0) || !std::isfinite(q.tol))
        throw ToleranceUnreachable("invert: tolerance must be positive and finite");

    const Interval J = cert.J;
    const Interval top = point_val(ball, J.lo);  // g decreasing: highest values at J.lo
    const Interval bot = point_val(ball, J.hi);  // lowest values at J.hi

    const double margin = std::max(64.0 * ball.radius, 1e-9);
    if (q.Y.lo > top.hi + margin || q.Y.hi < bot.lo - margin)
        throw RangeError("invert: query outside the range of g on J");
    const double range_width = top.hi - bot.lo;
    if (width(q.Y) > range_width / 4.0)
        throw RangeError("invert: query wider than a quarter of the range of g on J");

    const int cap = iteration_cap(width(J), q.tol);

    // Bracket from above: the largest point we can certify g to exceed Y at.
    // The certified region is a left segment of J (up to enclosure noise);
    // when even J.lo fails, the preimage hugs the left end and J.lo itself is
    // the sound answer by restriction.
    double a = J.lo;
    int iters_a = 0;
    if (top.lo >= q.Y.hi) {
        if (bot.lo >= q.Y.hi) {
            a = J.hi;  // the whole of J maps provably above Y
        } else {
            double good = J.lo, bad = J.hi;
            while (bad - good > q.tol && iters_a < cap) {
                double m = 0.5 * (good + bad);
                if (m <= good || m >= bad) break;  // double spacing reached
                ++iters_a;
                if (point_val(ball, m).lo >= q.Y.hi)
                    good = m;
                else
                    bad = m;
            }
            if (bad - good > q.tol)
                throw ToleranceUnreachable("invert: tolerance below the spacing of doubles in J");
            a = good;
        }
    }

    // Bracket from below, searching right of a.
    double b = J.hi;
    int iters_b = 0;
    if (bot.hi <= q.Y.lo) {
        if (point_val(ball, a).hi <= q.Y.lo) {
            b = a;  // degenerate: a certifies both sides
        } else {
            double bad = a, good = J.hi;
            while (good - bad > q.tol && iters_b < cap) {
                double m = 0.5 * (bad + good);
                if (m <= bad || m >= good) break;
                ++iters_b;
                if (point_val(ball, m).hi <= q.Y.lo)
                    good = m;
                else
                    bad = m;
            }
            if (good - bad > q.tol)
                throw ToleranceUnreachable("invert: tolerance below the spacing of doubles in J");
            b = good;
        }
    }

    if (stats) {
        stats->iterations_above = iters_a;
        stats->iterations_below = iters_b;
    }
    if (a > b) {
        // cannot happen for consistent certified brackets of a decreasing map
        throw Error("invert: bracket inversion, certificate inconsistent with ball");
    }
    return Interval(a, b);
}

Interval inverse_deriv(const FunctionBall& ball, const MonotonicityCertificate& cert,
                       const InverseQuery& q) {
    Interval X = invert(ball, cert, q);
    Interval D = eval_deriv(ball, X);
    if (D.lo <= 0.0 && D.hi >= 0.0)
        throw DerivativeContainsZero("inverse_deriv: derivative enclosure straddles zero on X");
    return Interval(1.0) / D;
}

}  // namespace feigdim
