#include "feigdim/interval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>

namespace feigdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Error-free transformations need the error term to be representable.
// That can fail near the subnormal range or near overflow, so outside this
// band we fall back to an unconditional outward nudge (still sound: a
// correctly rounded result is never more than one representable value away
// from the exact one).
inline bool eft_range(double v) {
    double a = std::fabs(v);
    return v == 0.0 || (a >= 1e-280 && a <= 1e280);
}

inline double nd(double x) { return std::nextafter(x, -kInf); }
inline double nu(double x) { return std::nextafter(x, kInf); }

[[noreturn]] void overflow(const char* op) {
    throw OverflowError(std::string("interval endpoint overflow in ") + op);
}

inline void require_finite(double v, const char* op) {
    if (!std::isfinite(v)) overflow(op);
}

}  // namespace

void Interval::check() const {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw OverflowError("interval endpoint not finite");
    if (lo > hi) throw Error("interval endpoints out of order");
}

double next_up(double x) { return nu(x); }
double next_down(double x) { return nd(x); }

// Knuth TwoSum: a + b = s + e exactly (no over/underflow caveats for e).
static inline double two_sum_err(double a, double b, double s) {
    double z = s - a;
    return (a - (s - z)) + (b - z);
}

double add_down(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) {
        if (s > 0) return std::numeric_limits<double>::max();  // still a lower bound
        overflow("add");
    }
    double e = two_sum_err(a, b, s);
    return e >= 0.0 ? s : nd(s);
}

double add_up(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) {
        if (s < 0) return -std::numeric_limits<double>::max();
        overflow("add");
    }
    double e = two_sum_err(a, b, s);
    return e <= 0.0 ? s : nu(s);
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
    double p = a * b;
    require_finite(p, "mul");
    if (p == 0.0 && a != 0.0 && b != 0.0) return nd(0.0);  // underflowed
    if (!eft_range(p)) return nd(p);
    double e = std::fma(a, b, -p);  // exact: a*b = p + e
    return e >= 0.0 ? p : nd(p);
}

double mul_up(double a, double b) {
    double p = a * b;
    require_finite(p, "mul");
    if (p == 0.0 && a != 0.0 && b != 0.0) return nu(0.0);
    if (!eft_range(p)) return nu(p);
    double e = std::fma(a, b, -p);
    return e <= 0.0 ? p : nu(p);
}

// Residual sign of q against x/y: r = fma(q, y, -x) has the sign of q*y - x
// whenever the fma result does not round a nonzero value to zero, which the
// eft_range guards exclude.
double div_down(double x, double y) {
    double q = x / y;
    require_finite(q, "div");
    if (x == 0.0) return 0.0;
    if (q == 0.0 || !eft_range(q) || !eft_range(x) || !eft_range(y)) return nd(q);
    double r = std::fma(q, y, -x);
    bool q_too_big = (y > 0.0) ? (r > 0.0) : (r < 0.0);
    return q_too_big ? nd(q) : q;
}

double div_up(double x, double y) {
    double q = x / y;
    require_finite(q, "div");
    if (x == 0.0) return 0.0;
    if (q == 0.0 || !eft_range(q) || !eft_range(x) || !eft_range(y)) return nu(q);
    double r = std::fma(q, y, -x);
    bool q_too_small = (y > 0.0) ? (r < 0.0) : (r > 0.0);
    return q_too_small ? nu(q) : q;
}

Interval add(const Interval& a, const Interval& b) {
    return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)};
}

Interval sub(const Interval& a, const Interval& b) {
    return {sub_down(a.lo, b.hi), sub_up(a.hi, b.lo)};
}

Interval mul(const Interval& a, const Interval& b) {
    double lo = std::min(std::min(mul_down(a.lo, b.lo), mul_down(a.lo, b.hi)),
                         std::min(mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)));
    double hi = std::max(std::max(mul_up(a.lo, b.lo), mul_up(a.lo, b.hi)),
                         std::max(mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)));
    return {lo, hi};
}

Interval div(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0)
        throw DivisionByZeroInterval("divisor interval contains zero");
    double lo = std::min(std::min(div_down(a.lo, b.lo), div_down(a.lo, b.hi)),
                         std::min(div_down(a.hi, b.lo), div_down(a.hi, b.hi)));
    double hi = std::max(std::max(div_up(a.lo, b.lo), div_up(a.lo, b.hi)),
                         std::max(div_up(a.hi, b.lo), div_up(a.hi, b.hi)));
    return {lo, hi};
}

Interval neg(const Interval& a) { return {-a.hi, -a.lo}; }

Interval abs_(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return {-a.hi, -a.lo};
    return {0.0, std::max(-a.lo, a.hi)};
}

namespace {

// x^k for x >= 0 by repeated directed multiplication (k is small here,
// at most a few hundred; monotone so the direction survives the chain).
double pow_down_nn(double x, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r = mul_down(r, x);
    return r;
}

double pow_up_nn(double x, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r = mul_up(r, x);
    return r;
}

}  // namespace

Interval pow_int(const Interval& x, unsigned k) {
    if (k == 0) return Interval(1.0);
    if (k == 1) return x;
    const bool even = (k % 2 == 0);
    if (x.lo >= 0.0) return {pow_down_nn(x.lo, k), pow_up_nn(x.hi, k)};
    if (x.hi <= 0.0) {
        double mlo = -x.hi, mhi = -x.lo;  // |x| in [mlo, mhi]
        if (even) return {pow_down_nn(mlo, k), pow_up_nn(mhi, k)};
        return {-pow_up_nn(mhi, k), -pow_down_nn(mlo, k)};
    }
    // straddles zero
    double mag = std::max(-x.lo, x.hi);
    if (even) return {0.0, pow_up_nn(mag, k)};
    return {-pow_up_nn(-x.lo, k), pow_up_nn(x.hi, k)};
}

// ---------------------------------------------------------------------------
// exp / log kernels. All series are evaluated in interval arithmetic with an
// explicit remainder term, so the enclosure property is compositional rather
// than depending on an offline ulp-error proof.

namespace {

// Exact scaling by 2^k. ldexp only rounds on over/underflow; both are
// excluded by the |x| <= 700 guard on exp, but nudge outward if it happens.
Interval scale_pow2(const Interval& v, int k) {
    double lo = std::ldexp(v.lo, k);
    double hi = std::ldexp(v.hi, k);
    require_finite(lo, "scale_pow2");
    require_finite(hi, "scale_pow2");
    if (std::fabs(lo) < 1e-280 && lo != 0.0) lo = nd(lo);
    if (std::fabs(hi) < 1e-280 && hi != 0.0) hi = nu(hi);
    return {lo, hi};
}

// atanh series: 2 * sum_{j>=0} t^(2j+1) / (2j+1), remainder after j = n
// bounded by 2 |t|^(2n+3) / ((2n+3)(1 - t^2)).
Interval atanh2_series(const Interval& t, int n) {
    Interval t2 = mul(t, t);
    Interval acc(0.0);
    for (int j = n; j >= 0; --j) {
        Interval c = div(Interval(1.0), Interval(2.0 * j + 1.0));
        acc = add(mul(acc, t2), c);
    }
    Interval s = mul(Interval(2.0), mul(t, acc));
    double tmax = std::max(std::fabs(t.lo), std::fabs(t.hi));
    double t2max = mul_up(tmax, tmax);
    double rem = mul_up(2.0, pow_up_nn(tmax, static_cast<unsigned>(2 * n + 3)));
    rem = div_up(rem, mul_down(2.0 * n + 3.0, sub_down(1.0, t2max)));
    return add(s, Interval(-rem, rem));
}

}  // namespace

const Interval& ln2_enc() {
    static const Interval v = [] {
        Interval t = div(Interval(1.0), Interval(3.0));  // (2-1)/(2+1)
        return atanh2_series(t, 26);
    }();
    return v;
}

Interval exp_enc(const Interval& x) {
    auto exp_point = [](double a) -> Interval {
        if (a == 0.0) return Interval(1.0);
        if (std::fabs(a) > 700.0)
            throw DomainError("exp_enc argument outside supported range [-700, 700]");
        int k = static_cast<int>(std::nearbyint(a / 0.6931471805599453));
        Interval r = sub(Interval(a), mul(Interval(static_cast<double>(k)), ln2_enc()));
        double rmax = std::max(std::fabs(r.lo), std::fabs(r.hi));
        if (rmax > 0.5) throw Error("exp_enc: argument reduction failed");
        // sum_{i=0..16} r^i / i!; tail below 0.5^17/17! * 18/17 < 3e-20
        static const std::array<Interval, 17> recip_fact = [] {
            std::array<Interval, 17> t{};
            double fact = 1.0;
            for (int i = 0; i <= 16; ++i) {
                t[static_cast<size_t>(i)] = div(Interval(1.0), Interval(fact));
                fact *= (i + 1);
            }
            return t;
        }();
        Interval acc(0.0);
        for (int i = 16; i >= 0; --i)
            acc = add(mul(acc, r), recip_fact[static_cast<size_t>(i)]);
        double rem = mul_up(2.0, div_up(pow_up_nn(rmax, 17), 355687428096000.0));  // 17!
        acc = add(acc, Interval(-rem, rem));
        return scale_pow2(acc, k);
    };
    Interval lo_enc = exp_point(x.lo);
    Interval hi_enc = exp_point(x.hi);
    // exp is increasing, so the endpoint enclosures bracket the image
    return {std::max(0.0, lo_enc.lo), hi_enc.hi};
}

Interval log_enc(const Interval& x) {
    if (x.lo <= 0.0) throw DomainError("log_enc requires a strictly positive interval");
    auto log_point = [](double a) -> Interval {
        if (a == 1.0) return Interval(0.0);
        int k = 0;
        double m = std::frexp(a, &k);  // a = m * 2^k, m in [0.5, 1)
        if (m < 0.70710678118654752440) {
            m *= 2.0;  // exact
            k -= 1;
        }
        // log m = 2 atanh((m-1)/(m+1)), |t| <= 0.1717
        Interval t = div(sub(Interval(m), Interval(1.0)), add(Interval(m), Interval(1.0)));
        Interval s = atanh2_series(t, 10);
        return add(s, mul(Interval(static_cast<double>(k)), ln2_enc()));
    };
    Interval lo_enc = log_point(x.lo);
    Interval hi_enc = log_point(x.hi);
    return {lo_enc.lo, hi_enc.hi};
}

Interval pow_real(const Interval& x, const Interval& s) {
    if (x.lo <= 0.0) throw DomainError("pow_real base must be strictly positive");
    Interval lx = log_enc(x);
    Interval p = mul(s, lx);
    return exp_enc(p);
}

// ---------------------------------------------------------------------------
// set operations

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    double lo = std::max(a.lo, b.lo);
    double hi = std::min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return Interval(lo, hi);
}

bool contains(const Interval& a, double x) { return a.lo <= x && x <= a.hi; }

bool subset(const Interval& inner, const Interval& outer) {
    return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

double width(const Interval& a) { return sub_up(a.hi, a.lo); }

double midpoint(const Interval& a) {
    double m = 0.5 * a.lo + 0.5 * a.hi;
    if (m < a.lo) m = a.lo;
    if (m > a.hi) m = a.hi;
    return m;
}

std::pair<Interval, Interval> split(const Interval& a) {
    double m = midpoint(a);
    return {Interval(a.lo, m), Interval(m, a.hi)};
}

// ---------------------------------------------------------------------------
// directed decimal formatting
//
// snprintf("%.*e") with enough digits prints the exact decimal expansion of a
// double (glibc converts exactly and pads with zeros), so directed rounding
// can be done on the digit string with no further floating-point error.

namespace {

struct DecimalDigits {
    bool negative = false;
    std::string digits;  // significant digits, no point
    int exp10 = 0;       // value = 0.digits * 10^(exp10+1), i.e. d.ddd e exp10
    bool zero = false;
};

DecimalDigits exact_decimal(double x) {
    DecimalDigits d;
    if (x == 0.0) {
        d.zero = true;
        d.digits = "0";
        return d;
    }
    d.negative = x < 0.0;
    char buf[900];
    // 800 fractional digits covers the longest exact expansion of a double
    std::snprintf(buf, sizeof buf, "%.*e", 800, std::fabs(x));
    const char* e = std::strchr(buf, 'e');
    d.exp10 = std::atoi(e + 1);
    d.digits.reserve(801);
    for (const char* p = buf; p != e; ++p)
        if (*p != '.') d.digits.push_back(*p);
    return d;
}

// Round the digit string to `keep` digits, either toward zero (truncate) or
// away from zero (increment with carry). Returns digits/exp10 adjusted.
void round_digit_string(DecimalDigits& d, int keep, bool away_from_zero) {
    bool discarded_nonzero = false;
    for (size_t i = static_cast<size_t>(keep); i < d.digits.size(); ++i)
        if (d.digits[i] != '0') { discarded_nonzero = true; break; }
    d.digits.resize(static_cast<size_t>(keep), '0');
    if (!discarded_nonzero || !away_from_zero) return;
    int i = keep - 1;
    while (i >= 0) {
        if (d.digits[static_cast<size_t>(i)] != '9') {
            d.digits[static_cast<size_t>(i)]++;
            return;
        }
        d.digits[static_cast<size_t>(i)] = '0';
        --i;
    }
    d.digits.insert(d.digits.begin(), '1');  // 999 -> 1000
    d.digits.resize(static_cast<size_t>(keep));
    d.exp10 += 1;
}

std::string render(const DecimalDigits& d, int digits) {
    std::string out;
    if (d.negative) out.push_back('-');
    // fixed notation for moderate exponents, scientific otherwise
    if (d.exp10 >= -4 && d.exp10 < 17) {
        if (d.exp10 >= 0) {
            int int_digits = d.exp10 + 1;
            if (int_digits >= digits) {
                out += d.digits.substr(0, static_cast<size_t>(digits));
                out.append(static_cast<size_t>(int_digits - digits), '0');
            } else {
                out += d.digits.substr(0, static_cast<size_t>(int_digits));
                out.push_back('.');
                out += d.digits.substr(static_cast<size_t>(int_digits));
            }
        } else {
            out += "0.";
            out.append(static_cast<size_t>(-d.exp10 - 1), '0');
            out += d.digits;
        }
    } else {
        out.push_back(d.digits[0]);
        if (digits > 1) {
            out.push_back('.');
            out += d.digits.substr(1);
        }
        out.push_back('e');
        out += std::to_string(d.exp10);
    }
    return out;
}

}  // namespace

std::string format_directed(double x, int digits, bool toward_neg) {
    if (digits < 1) throw Error("format_directed needs at least one digit");
    if (!std::isfinite(x)) throw OverflowError("format_directed: non-finite value");
    DecimalDigits d = exact_decimal(x);
    if (d.zero) {
        DecimalDigits z;
        z.digits.assign(static_cast<size_t>(digits), '0');
        return render(z, digits);
    }
    bool away = d.negative ? toward_neg : !toward_neg;
    round_digit_string(d, digits, away);
    return render(d, digits);
}

std::pair<std::string, std::string> format_outward(const Interval& x, int digits) {
    return {format_directed(x.lo, digits, true), format_directed(x.hi, digits, false)};
}

Interval parse_decimal_enclosure(const std::string& s) {
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || end != s.c_str() + s.size())
        throw Error("parse_decimal_enclosure: not a decimal number: " + s);
    if (!std::isfinite(v)) throw OverflowError("parse_decimal_enclosure: out of range");
    // strtod rounds to nearest, so the exact value is within one neighbor
    return {nd(v), nu(v)};
}

}  // namespace feigdim
