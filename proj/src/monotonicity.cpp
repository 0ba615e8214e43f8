#include "feigdim/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "feigdim/inverse.hpp"
#include "feigdim/renormalization.hpp"
#include "json.hpp"

namespace feigdim {

namespace {

constexpr const char* kCertFormatTag = "feigdim_cert_v1";

// Tight range enclosure: hull of evaluations over a uniform chunking of K.
// Consecutive chunks share endpoints, so the union is exactly K.
Interval range_on(const FunctionBall& ball, const Interval& K, int chunks) {
    Interval acc;
    bool first = true;
    double prev = K.lo;
    for (int i = 1; i <= chunks; ++i) {
        double next = (i == chunks) ? K.hi : K.lo + (K.hi - K.lo) * (double(i) / chunks);
        if (next < prev) next = prev;
        Interval piece = eval(ball, Interval(prev, next));
        acc = first ? piece : hull(acc, piece);
        first = false;
        prev = next;
    }
    return acc;
}

Interval sign_target_enclosure(SignTarget f, const FunctionBall& ball, const Interval& K) {
    return f == SignTarget::gprime ? eval_deriv(ball, K) : eval_second_deriv(ball, K);
}

void certify_negative(SignTarget f, const FunctionBall& ball, const Interval& K, int depth,
                      int max_depth, SignCover& out) {
    Interval e = sign_target_enclosure(f, ball, K);
    if (e.hi < 0.0) {
        out.leaves.push_back({K, e});
        out.max_depth_used = std::max(out.max_depth_used, depth);
        return;
    }
    if (e.lo > 0.0) {
        throw PositiveSignWitness("verify_sign_on: target is provably positive on a subinterval",
                                  K, e);
    }
    if (depth >= max_depth) {
        throw Inconclusive("verify_sign_on: depth cap reached with sign still undecided", K);
    }
    auto halves = split(K);
    certify_negative(f, ball, halves.first, depth + 1, max_depth, out);
    certify_negative(f, ball, halves.second, depth + 1, max_depth, out);
}

std::string hex_of(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return std::string(buf);
}

double parse_hex(const std::string& s, const char* what) {
    if (s.empty()) throw ParseError(std::string("certificate: empty number for ") + what);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v))
        throw ParseError(std::string("certificate: malformed number for ") + what);
    return v;
}

}  // namespace

Interval compute_J(const FunctionBall& ball) {
    const Interval one(1.0);
    Interval g1 = eval(ball, one);
    Interval gg1 = eval(ball, g1);
    Interval J(gg1.lo, 1.0);

    // Replay the identity alpha * g(J) = [alpha^{-1}, 1]: the chunked range
    // enclosure of g over J, rescaled by alpha, must land inside the base
    // interval up to chunking slack.  A failure means the ball is not a
    // renormalization fixed point and J would be meaningless downstream.
    RenormConstants rc = alpha_of(ball);
    Interval gJ = range_on(ball, J, 256);
    Interval aJ = rc.alpha * gJ;
    Interval I(rc.alpha_inv.lo, 1.0);
    const double slack = 1e-2;
    if (aJ.lo < I.lo - slack || aJ.hi > I.hi + slack)
        throw Error("compute_J: rescaled image of J fails to reproduce the base interval");
    return J;
}

SignCover verify_sign_on(SignTarget f, const FunctionBall& ball, const Interval& K,
                         int max_depth) {
    if (max_depth < 0) throw Error("verify_sign_on: max_depth must be non-negative");
    SignCover out;
    out.target = f;
    certify_negative(f, ball, K, 0, max_depth, out);
    return out;
}

OrbitEnclosure orbit_enclosures(const FunctionBall& ball, int count) {
    if (count < 2) throw Error("orbit_enclosures: count must be at least 2");
    OrbitEnclosure orbit;
    orbit.points.reserve(size_t(count));
    orbit.points.push_back(Interval(0.0, 0.0));
    for (int k = 1; k < count; ++k) orbit.points.push_back(eval(ball, orbit.points.back()));
    return orbit;
}

int default_max_depth(int degree_d) { return degree_d == 4 ? 30 : 24; }

MonotonicityCertificate build_certificate(const FunctionBall& ball, int max_depth_gprime,
                                          int max_depth_gsecond) {
    MonotonicityCertificate cert;
    cert.degree_d = ball.degree_d;
    cert.J = compute_J(ball);

    SignCover first = verify_sign_on(SignTarget::gprime, ball, cert.J, max_depth_gprime);
    cert.gprime_negative = true;
    double floor = std::numeric_limits<double>::infinity();
    for (const SignLeaf& leaf : first.leaves) floor = std::min(floor, -leaf.enclosure.hi);
    cert.min_abs_gprime = floor;

    SignCover second = verify_sign_on(SignTarget::gsecond, ball, cert.J, max_depth_gsecond);
    cert.gsecond_negative = true;
    cert.cover = second.leaves;
    cert.max_depth_used = std::max(first.max_depth_used, second.max_depth_used);
    cert.ball_checksum = ball_checksum(ball);
    return cert;
}

void save_certificate(const MonotonicityCertificate& cert, const std::string& path) {
    nlohmann::json j;
    j["format"] = kCertFormatTag;
    j["degree_d"] = cert.degree_d;
    j["J_lo"] = hex_of(cert.J.lo);
    j["J_hi"] = hex_of(cert.J.hi);
    j["gprime_negative"] = cert.gprime_negative;
    j["gsecond_negative"] = cert.gsecond_negative;
    j["max_depth_used"] = cert.max_depth_used;
    j["min_abs_gprime"] = hex_of(cert.min_abs_gprime);
    j["ball_checksum"] = cert.ball_checksum;
    nlohmann::json cover = nlohmann::json::array();
    for (const SignLeaf& leaf : cert.cover) {
        cover.push_back({hex_of(leaf.x.lo), hex_of(leaf.x.hi), hex_of(leaf.enclosure.lo),
                         hex_of(leaf.enclosure.hi)});
    }
    j["cover"] = std::move(cover);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("save_certificate: cannot open for writing: " + path);
    out << j.dump(1) << '\n';
    if (!out) throw Error("save_certificate: write failed: " + path);
}

MonotonicityCertificate load_certificate(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("load_certificate: cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("load_certificate: invalid JSON: ") + e.what());
    }

    MonotonicityCertificate cert;
    try {
        if (!j.is_object() || j.value("format", std::string()) != kCertFormatTag)
            throw ParseError("load_certificate: missing or unknown format tag");
        cert.degree_d = j.at("degree_d").get<int>();
        double j_lo = parse_hex(j.at("J_lo").get<std::string>(), "J_lo");
        double j_hi = parse_hex(j.at("J_hi").get<std::string>(), "J_hi");
        if (!(j_lo <= j_hi)) throw ParseError("load_certificate: J endpoints out of order");
        cert.J = Interval(j_lo, j_hi);
        cert.gprime_negative = j.at("gprime_negative").get<bool>();
        cert.gsecond_negative = j.at("gsecond_negative").get<bool>();
        cert.max_depth_used = j.at("max_depth_used").get<int>();
        cert.min_abs_gprime = parse_hex(j.at("min_abs_gprime").get<std::string>(), "min_abs_gprime");
        cert.ball_checksum = j.at("ball_checksum").get<std::string>();
        for (const auto& entry : j.at("cover")) {
            if (!entry.is_array() || entry.size() != 4)
                throw ParseError("load_certificate: malformed cover entry");
            double x_lo = parse_hex(entry[0].get<std::string>(), "cover x_lo");
            double x_hi = parse_hex(entry[1].get<std::string>(), "cover x_hi");
            double e_lo = parse_hex(entry[2].get<std::string>(), "cover enclosure lo");
            double e_hi = parse_hex(entry[3].get<std::string>(), "cover enclosure hi");
            if (!(x_lo <= x_hi) || !(e_lo <= e_hi))
                throw ParseError("load_certificate: cover entry endpoints out of order");
            cert.cover.push_back({Interval(x_lo, x_hi), Interval(e_lo, e_hi)});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("load_certificate: missing or mistyped field: ") + e.what());
    }

    // structural invariants the rest of the pipeline relies on
    if (cert.degree_d < 2 || cert.degree_d > 4)
        throw ParseError("load_certificate: unsupported degree");
    if (cert.ball_checksum.rfind("fnv1a64:", 0) != 0)
        throw ParseError("load_certificate: malformed ball checksum");
    if (cert.gprime_negative && !(cert.min_abs_gprime > 0.0))
        throw ParseError("load_certificate: derivative floor must be positive");
    if (cert.gsecond_negative) {
        if (cert.cover.empty()) throw ParseError("load_certificate: certified cover is empty");
        for (size_t i = 0; i < cert.cover.size(); ++i) {
            if (!(cert.cover[i].enclosure.hi < 0.0))
                throw ParseError("load_certificate: cover enclosure not negative");
            if (i + 1 < cert.cover.size() && cert.cover[i].x.hi != cert.cover[i + 1].x.lo)
                throw ParseError("load_certificate: cover leaves not adjacent");
        }
        if (cert.cover.front().x.lo > cert.J.lo || cert.cover.back().x.hi < cert.J.hi)
            throw ParseError("load_certificate: cover does not span J");
    }
    return cert;
}

const char* cover_tag_name(CoverTag t) {
    switch (t) {
        case CoverTag::g: return "g";
        case CoverTag::gprime: return "gprime";
        case CoverTag::gsecond: return "gsecond";
        case CoverTag::psi0: return "psi0";
        case CoverTag::psi1: return "psi1";
        case CoverTag::psi0deriv: return "psi0deriv";
        case CoverTag::psi1deriv: return "psi1deriv";
    }
    return "unknown";
}

std::vector<CoverRectangle> emit_cover_rectangles(const FunctionBall& ball, CoverTag which,
                                                  int grid) {
    if (grid < 1) throw Error("emit_cover_rectangles: grid must be at least 1");
    RenormConstants rc = alpha_of(ball);
    Interval J = compute_J(ball);
    Interval I(rc.alpha_inv.lo, 1.0);
    const bool over_J = (which == CoverTag::gprime || which == CoverTag::gsecond);
    const Interval dom = over_J ? J : I;

    std::vector<double> cuts(size_t(grid) + 1);
    for (int i = 0; i <= grid; ++i) cuts[size_t(i)] = dom.lo + (dom.hi - dom.lo) * (double(i) / grid);
    cuts[0] = dom.lo;
    cuts[size_t(grid)] = dom.hi;
    for (int i = 1; i <= grid; ++i)
        if (cuts[size_t(i)] < cuts[size_t(i) - 1]) cuts[size_t(i)] = cuts[size_t(i) - 1];

    // the inverse-based tags need the monotonicity certificate and invert
    // queries no wider than a fraction of the range of g on J
    std::optional<MonotonicityCertificate> cert;
    double query_cap = 0.0;
    if (which == CoverTag::psi1 || which == CoverTag::psi1deriv) {
        int depth = default_max_depth(ball.degree_d);
        cert = build_certificate(ball, depth, depth);
        Interval top = eval(ball, Interval(cert->J.lo, cert->J.lo));
        Interval bot = eval(ball, Interval(cert->J.hi, cert->J.hi));
        query_cap = std::max((top.hi - bot.lo) / 8.0, 1e-9);
    }

    std::vector<CoverRectangle> out;
    out.reserve(size_t(grid));
    for (int i = 0; i < grid; ++i) {
        Interval X(cuts[size_t(i)], cuts[size_t(i) + 1]);
        Interval Yv;
        switch (which) {
            case CoverTag::g: Yv = eval(ball, X); break;
            case CoverTag::gprime: Yv = eval_deriv(ball, X); break;
            case CoverTag::gsecond: Yv = eval_second_deriv(ball, X); break;
            case CoverTag::psi0: Yv = rc.alpha_inv * X; break;
            case CoverTag::psi0deriv: Yv = rc.alpha_inv; break;
            case CoverTag::psi1:
            case CoverTag::psi1deriv: {
                Interval Yq = rc.alpha_inv * X;
                int pieces = std::max(1, int(std::ceil(width(Yq) / query_cap)));
                bool first = true;
                for (int p = 0; p < pieces; ++p) {
                    double y_lo = Yq.lo + (Yq.hi - Yq.lo) * (double(p) / pieces);
                    double y_hi = (p + 1 == pieces)
                                      ? Yq.hi
                                      : Yq.lo + (Yq.hi - Yq.lo) * (double(p + 1) / pieces);
                    if (p == 0) y_lo = Yq.lo;
                    if (y_hi < y_lo) y_hi = y_lo;
                    InverseQuery sub{Interval(y_lo, y_hi), 1e-12};
                    Interval piece = (which == CoverTag::psi1)
                                         ? invert(ball, *cert, sub)
                                         : rc.alpha_inv /
                                               eval_deriv(ball, invert(ball, *cert, sub));
                    Yv = first ? piece : hull(Yv, piece);
                    first = false;
                }
                break;
            }
        }
        out.push_back({X, Yv});
    }
    return out;
}

}  // namespace feigdim
