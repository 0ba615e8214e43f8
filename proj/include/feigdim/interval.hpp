#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

// Closed interval arithmetic over double with outward rounding.
//
// Every operation returns an interval that contains the exact real result
// for all inputs drawn from the operand intervals. Directed rounding is done
// without touching the FPU rounding mode: each endpoint is computed in
// round-to-nearest and nudged one representable value outward only when an
// error-free transformation shows the rounded result lies on the wrong side.
// Dyadically exact results therefore stay exact ([1,2]+[3,4] is [4,6], not
// a 2-ulp slab around it).
//
// Requires strict IEEE semantics from the compiler: no -ffast-math, and
// -ffp-contract=off (the build enforces the latter).

namespace feigdim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An endpoint left the finite range.
struct OverflowError : Error {
    using Error::Error;
};

// Divisor interval contains zero.
struct DivisionByZeroInterval : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of the operation
// (log of a nonpositive interval, pow_real base touching zero, ...).
struct DomainError : Error {
    using Error::Error;
};

struct Interval {
    double lo;
    double hi;

    Interval() : lo(0.0), hi(0.0) {}
    explicit Interval(double p) : lo(p), hi(p) { check(); }
    Interval(double l, double h) : lo(l), hi(h) { check(); }

    void check() const;
};

// -- arithmetic ------------------------------------------------------------

Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval mul(const Interval& a, const Interval& b);
Interval div(const Interval& a, const Interval& b);  // throws DivisionByZeroInterval if 0 in b
Interval neg(const Interval& a);                     // exact
Interval abs_(const Interval& a);                    // exact

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }
inline Interval operator/(const Interval& a, const Interval& b) { return div(a, b); }
inline Interval operator-(const Interval& a) { return neg(a); }

// X^k for k >= 0, with sign/parity handling; pow_int(X, 0) = [1,1] for any X.
Interval pow_int(const Interval& x, unsigned k);

// X^S = exp(S log X); requires X.lo > 0.
Interval pow_real(const Interval& x, const Interval& s);

// Guaranteed enclosures of exp and log. exp requires |argument| <= 700
// (covers every use here; keeps power-of-two rescaling exact), log requires
// a strictly positive interval.
Interval exp_enc(const Interval& x);
Interval log_enc(const Interval& x);

// Enclosure of ln 2, computed once from 2*atanh(1/3).
const Interval& ln2_enc();

// -- set operations --------------------------------------------------------

Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);  // nullopt when empty
bool contains(const Interval& a, double x);
bool subset(const Interval& inner, const Interval& outer);
double width(const Interval& a);     // upper bound of hi - lo
double midpoint(const Interval& a);  // some point in [lo, hi]; not outward
std::pair<Interval, Interval> split(const Interval& a);  // halves share the midpoint exactly

// -- directed decimal formatting --------------------------------------------

// Decimal strings with `digits` significant digits; the lo string rounds
// toward -inf and the hi string toward +inf, so the printed bracket still
// contains X. Exact decimal expansions are printed without adjustment
// (format_outward([2,2], 3) is {"2.00", "2.00"}).
std::pair<std::string, std::string> format_outward(const Interval& x, int digits);

// One double, rounded toward -inf (toward_neg) or +inf in decimal.
std::string format_directed(double x, int digits, bool toward_neg);

// Enclosure of the exact value denoted by a decimal string.
Interval parse_decimal_enclosure(const std::string& s);

// -- directed scalar helpers (exposed for the modules above this one) -------

double next_up(double x);
double next_down(double x);
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);

}  // namespace feigdim
