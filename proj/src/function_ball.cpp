#include "feigdim/function_ball.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace feigdim {

namespace {

void require_valid(const FunctionBall& g) {
    if (g.degree_d < 2 || g.degree_d > 16) throw DomainError("ball degree_d out of range");
    if (!(g.rho > 1.0)) throw DomainError("ball rho must exceed 1");
    if (!(g.radius >= 0.0)) throw DomainError("ball radius must be nonnegative");
    if (g.coeffs.size() != static_cast<size_t>(g.truncation_N) + 1)
        throw DomainError("ball coefficient count does not match truncation_N");
    if (!(g.t_max > 0.0 && g.t_max < 1.0)) throw DomainError("ball t_max must lie in (0,1)");
}

// |x| as an interval of nonnegative magnitudes, domain-checked.
Interval magnitude(const FunctionBall& g, const Interval& x) {
    Interval y = abs_(x);
    if (y.hi > mul_down(g.rho, g.t_max))
        throw DomainExceeded("evaluation point outside |x| <= rho * t_max");
    return y;
}

// Horner over interval coefficients in the (nonnegative) variable v.
Interval horner(const std::vector<Interval>& c, const Interval& v) {
    Interval acc(0.0);
    for (size_t k = c.size(); k-- > 0;) acc = add(mul(acc, v), c[k]);
    return acc;
}

}  // namespace

double deriv_tail_factor_m1(double t_hi, int d) {
    if (t_hi <= 0.0) return 0.0;
    if (t_hi >= 1.0) throw DomainError("tail factor needs t < 1");
    const double td = pow_int(Interval(t_hi), static_cast<unsigned>(d)).hi;  // t^d, upper
    // terms a_k = k t^(dk-1); a_{k+1}/a_k = ((k+1)/k) t^d
    double p = pow_int(Interval(t_hi), static_cast<unsigned>(d - 1)).hi;  // t^(dk-1) upper
    double best = 0.0;
    for (int k = 1; k < 100000; ++k) {
        double a = mul_up(static_cast<double>(k), p);
        if (a > best) best = a;
        if (mul_up(static_cast<double>(k + 1), td) < static_cast<double>(k)) break;
        p = mul_up(p, td);
    }
    return best;
}

double deriv_tail_factor_m2(double t_hi, int d) {
    if (t_hi <= 0.0) return static_cast<double>(d) * (d - 1.0);  // k = 1 term at t = 0
    if (t_hi >= 1.0) throw DomainError("tail factor needs t < 1");
    const double td = pow_int(Interval(t_hi), static_cast<unsigned>(d)).hi;
    // terms b_k = (dk)(dk-1) t^(dk-2); ratio ((dk+d)(dk+d-1))/((dk)(dk-1)) t^d
    double p = pow_int(Interval(t_hi), static_cast<unsigned>(d - 2)).hi;
    double best = 0.0;
    for (int k = 1; k < 100000; ++k) {
        double dk = static_cast<double>(d) * k;
        double b = mul_up(mul_up(dk, dk - 1.0), p);
        if (b > best) best = b;
        double ratio_num = mul_up(mul_up(dk + d, dk + d - 1.0), td);
        double ratio_den = mul_down(dk, dk - 1.0);
        if (ratio_num < ratio_den) break;
        p = mul_up(p, td);
    }
    return best;
}

Interval eval(const FunctionBall& g, const Interval& x) {
    require_valid(g);
    Interval y = magnitude(g, x);
    Interval u = pow_int(div(y, Interval(g.rho)), static_cast<unsigned>(g.degree_d));
    Interval center = horner(g.coeffs, u);
    return add(center, Interval(-g.radius, g.radius));
}

namespace {

// First derivative on a nonnegative magnitude interval Y:
//   E'(y) = (d / rho^d) y^(d-1) H1(v),  H1(v) = sum_{k>=1} k c_k v^(k-1),
// v = (y/rho)^d, plus the pointwise ball tail.
Interval deriv_on_magnitudes(const FunctionBall& g, const Interval& y) {
    const int d = g.degree_d;
    Interval t = div(y, Interval(g.rho));
    Interval v = pow_int(t, static_cast<unsigned>(d));
    // H1 via Horner with k-weighted coefficients, shifted one power down
    Interval acc(0.0);
    for (size_t k = g.coeffs.size(); k-- > 1;) {
        Interval term = mul(g.coeffs[k], Interval(static_cast<double>(k)));
        acc = add(mul(acc, v), term);
    }
    Interval scale = div(Interval(static_cast<double>(d)),
                         pow_int(Interval(g.rho), static_cast<unsigned>(d)));
    Interval center = mul(mul(scale, pow_int(y, static_cast<unsigned>(d - 1))), acc);
    double tail = mul_up(g.radius,
                         mul_up(div_up(static_cast<double>(d), g.rho),
                                deriv_tail_factor_m1(t.hi, d)));
    return add(center, Interval(-tail, tail));
}

// Second derivative on magnitudes:
//   E''(y) = (d y^(d-2) / rho^d) H2(v),  H2(v) = sum_{k>=1} k (dk-1) c_k v^(k-1).
Interval second_deriv_on_magnitudes(const FunctionBall& g, const Interval& y) {
    const int d = g.degree_d;
    Interval t = div(y, Interval(g.rho));
    Interval v = pow_int(t, static_cast<unsigned>(d));
    Interval acc(0.0);
    for (size_t k = g.coeffs.size(); k-- > 1;) {
        double kk = static_cast<double>(k);
        Interval term = mul(g.coeffs[k], Interval(kk * (d * kk - 1.0)));
        acc = add(mul(acc, v), term);
    }
    Interval scale = div(Interval(static_cast<double>(d)),
                         pow_int(Interval(g.rho), static_cast<unsigned>(d)));
    Interval ypow = (d == 2) ? Interval(1.0) : pow_int(y, static_cast<unsigned>(d - 2));
    Interval center = mul(mul(scale, ypow), acc);
    double tail = mul_up(g.radius,
                         div_up(deriv_tail_factor_m2(t.hi, d), mul_down(g.rho, g.rho)));
    return add(center, Interval(-tail, tail));
}

}  // namespace

Interval eval_deriv(const FunctionBall& g, const Interval& x) {
    require_valid(g);
    Interval y = magnitude(g, x);
    bool has_pos = x.hi > 0.0;
    bool has_neg = x.lo < 0.0;
    if (has_pos && !has_neg) return deriv_on_magnitudes(g, y);
    if (has_neg && !has_pos) return neg(deriv_on_magnitudes(g, y));
    // straddles zero: f'(-x) = -f'(x); split at zero and hull
    Interval pos = deriv_on_magnitudes(g, Interval(0.0, x.hi));
    Interval negside = neg(deriv_on_magnitudes(g, Interval(0.0, -x.lo)));
    return hull(pos, negside);
}

Interval eval_second_deriv(const FunctionBall& g, const Interval& x) {
    require_valid(g);
    Interval y = magnitude(g, x);  // f'' is even, magnitudes suffice
    if (x.lo <= 0.0 && x.hi >= 0.0) y = Interval(0.0, y.hi);
    return second_deriv_on_magnitudes(g, y);
}

std::pair<Interval, Interval> deriv_identity_check(const FunctionBall& g,
                                                   const Interval& alpha_inv,
                                                   const Interval& x) {
    Interval inner = mul(alpha_inv, x);
    Interval lhs = eval_deriv(g, x);
    Interval rhs = mul(eval_deriv(g, eval(g, inner)), eval_deriv(g, inner));
    return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// serialization

namespace {

constexpr char kFormatTag[] = "feigdim_ball_v1";

std::string hexf(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

uint64_t fnv1a64(const std::string& payload) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Everything save_ball writes except the checksum line itself.
std::string canonical_payload(const FunctionBall& g) {
    std::ostringstream os;
    os << kFormatTag << "\n";
    os << "degree_d " << g.degree_d << "\n";
    os << "rho " << hexf(g.rho) << "\n";
    os << "radius " << hexf(g.radius) << "\n";
    os << "truncation_N " << g.truncation_N << "\n";
    os << "provenance " << g.provenance.source << "\n";
    os << "residual_l1 " << hexf(g.provenance.residual_l1) << "\n";
    os << "assumed_rigorous " << (g.provenance.assumed_rigorous ? 1 : 0) << "\n";
    for (size_t k = 0; k < g.coeffs.size(); ++k)
        os << "coeff " << k << " " << hexf(g.coeffs[k].lo) << " " << hexf(g.coeffs[k].hi)
           << "\n";
    return os.str();
}

double parse_hexf(const std::string& tok, int line_no) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
        throw ParseError("ball file line " + std::to_string(line_no) +
                         ": bad float token '" + tok + "'");
    return v;
}

}  // namespace

std::string ball_checksum(const FunctionBall& g) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, fnv1a64(canonical_payload(g)));
    return buf;
}

void save_ball(const FunctionBall& g, const std::string& path) {
    require_valid(g);
    std::string payload = canonical_payload(g);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open ball file for writing: " + path);
    // checksum goes after the scalar header, before the coefficients
    size_t split = payload.find("coeff ");
    if (split == std::string::npos) split = payload.size();
    out << payload.substr(0, split);
    out << "checksum " << ball_checksum(g) << "\n";
    out << payload.substr(split);
    if (!out) throw Error("short write to ball file: " + path);
}

FunctionBall load_ball(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open ball file: " + path);
    FunctionBall g;
    g.coeffs.clear();
    std::string checksum_claim;
    std::string line;
    int line_no = 0;
    bool have_n = false;
    std::vector<std::pair<size_t, Interval>> coeffs;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != kFormatTag)
                throw ParseError("ball file line 1: unknown format tag '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto want = [&](bool ok, const char* what) {
            if (!ok)
                throw ParseError("ball file line " + std::to_string(line_no) +
                                 ": malformed " + std::string(what));
        };
        if (key == "degree_d") {
            want(static_cast<bool>(ls >> g.degree_d), "degree_d");
        } else if (key == "rho") {
            std::string tok;
            want(static_cast<bool>(ls >> tok), "rho");
            g.rho = parse_hexf(tok, line_no);
        } else if (key == "radius") {
            std::string tok;
            want(static_cast<bool>(ls >> tok), "radius");
            g.radius = parse_hexf(tok, line_no);
            if (g.radius < 0.0)
                throw ParseError("ball file line " + std::to_string(line_no) +
                                 ": negative radius");
        } else if (key == "truncation_N") {
            want(static_cast<bool>(ls >> g.truncation_N), "truncation_N");
            have_n = true;
        } else if (key == "provenance") {
            // the source is free text (may contain spaces): rest of the line
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            want(!rest.empty(), "provenance");
            g.provenance.source = rest;
        } else if (key == "residual_l1") {
            std::string tok;
            want(static_cast<bool>(ls >> tok), "residual_l1");
            g.provenance.residual_l1 = parse_hexf(tok, line_no);
        } else if (key == "assumed_rigorous") {
            int b = 0;
            want(static_cast<bool>(ls >> b), "assumed_rigorous");
            g.provenance.assumed_rigorous = (b != 0);
        } else if (key == "checksum") {
            want(static_cast<bool>(ls >> checksum_claim), "checksum");
        } else if (key == "coeff") {
            size_t idx = 0;
            std::string tlo, thi;
            want(static_cast<bool>(ls >> idx >> tlo >> thi), "coeff");
            coeffs.emplace_back(idx, Interval(parse_hexf(tlo, line_no),
                                              parse_hexf(thi, line_no)));
        } else {
            throw ParseError("ball file line " + std::to_string(line_no) +
                             ": unknown field '" + key + "'");
        }
    }
    if (!have_n) throw ParseError("ball file: missing truncation_N");
    if (checksum_claim.empty()) throw ParseError("ball file: missing checksum");
    g.coeffs.assign(static_cast<size_t>(g.truncation_N) + 1, Interval(0.0));
    if (coeffs.size() != g.coeffs.size())
        throw ParseError("ball file: coefficient count does not match truncation_N");
    for (auto& [idx, c] : coeffs) {
        if (idx >= g.coeffs.size())
            throw ParseError("ball file: coefficient index out of range");
        g.coeffs[idx] = c;
    }
    require_valid(g);
    std::string recomputed = ball_checksum(g);
    if (recomputed != checksum_claim)
        throw ChecksumMismatch("ball file checksum mismatch: stored " + checksum_claim +
                               ", recomputed " + recomputed);
    return g;
}

}  // namespace feigdim
