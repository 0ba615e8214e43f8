#include "feigdim/ifs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

namespace feigdim {

namespace {

// nodes vectors are always complete generations produced by this module:
// size 2^n with node.sigma equal to its index.
int generation_of(const std::vector<IFSNode>& nodes) {
    const std::size_t size = nodes.size();
    if (size == 0 || (size & (size - 1)) != 0) {
        throw Error("expand_generation: node count must be a power of two");
    }
    int n = 0;
    while ((std::size_t{1} << n) < size) ++n;
    for (std::size_t i = 0; i < size; ++i) {
        if (nodes[i].sigma != i) {
            throw Error("expand_generation: node order does not match symbol indices");
        }
    }
    return n;
}

void check_child(const IFSNode& child, int generation) {
    if (child.left_pt.lo > child.right_pt.hi) {
        throw NodeOrderViolation("node " + symbol_string(child.sigma, generation) +
                                 ": endpoint enclosures are inverted");
    }
    if (!(child.deriv_inf > 0.0) || !(child.deriv_sup < 1.0) ||
        child.deriv_inf > child.deriv_sup) {
        throw ContractionViolation("node " + symbol_string(child.sigma, generation) +
                                   ": derivative carriers left (0, 1)");
    }
    constexpr double kWidthBudget = 1e-8;
    if (width(child.left_pt) > kWidthBudget || width(child.right_pt) > kWidthBudget) {
        throw RigorAbort("node " + symbol_string(child.sigma, generation) +
                         ": endpoint enclosure wider than 1e-8");
    }
}

// Balanced pairwise reduction; the association order is fixed by the input
// order alone, so repeated runs sum identically.
Interval reduce_sum(std::vector<Interval> terms) {
    if (terms.empty()) return Interval(0.0, 0.0);
    while (terms.size() > 1) {
        std::vector<Interval> next;
        next.reserve(terms.size() / 2 + 1);
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
            next.push_back(add(terms[i], terms[i + 1]));
        }
        if (terms.size() % 2 != 0) next.push_back(terms.back());
        terms = std::move(next);
    }
    return terms[0];
}

}  // namespace

std::string symbol_string(std::uint32_t sigma, int generation) {
    if (generation < 0 || generation > 31) throw Error("symbol_string: generation out of range");
    std::string word;
    word.reserve(static_cast<std::size_t>(generation));
    for (int k = generation - 1; k >= 0; --k) {
        word.push_back(((sigma >> k) & 1u) ? '1' : '0');
    }
    return word;
}

IFSNode root_node(const RenormConstants& consts) {
    if (!(consts.alpha_inv.hi < 0.0)) {
        throw Error("root_node: alpha_inv must be negative");
    }
    IFSNode root;
    root.sigma = 0;
    root.left_pt = consts.alpha_inv;
    root.right_pt = Interval(1.0, 1.0);
    root.deriv_sup = 1.0;
    root.deriv_inf = 1.0;
    return root;
}

Interval psi0(const Interval& X, const RenormConstants& consts) {
    return mul(consts.alpha_inv, X);
}

Interval psi1(const Interval& X, const FunctionBall& ball, const MonotonicityCertificate& cert,
              double tol) {
    const Interval alpha_inv = eval(ball, Interval(1.0, 1.0));
    InverseQuery q;
    q.Y = mul(alpha_inv, X);
    q.tol = tol;
    return invert(ball, cert, q);
}

Interval psi1_deriv(const Interval& x, const FunctionBall& ball,
                    const MonotonicityCertificate& cert, double tol) {
    const Interval alpha_inv = eval(ball, Interval(1.0, 1.0));
    InverseQuery q;
    q.Y = mul(alpha_inv, x);
    q.tol = tol;
    // alpha_inv and (g^{-1})' are both negative, so the product is positive;
    // abs_ keeps the sign convention explicit.
    return abs_(mul(alpha_inv, inverse_deriv(ball, cert, q)));
}

std::vector<IFSNode> expand_generation(const std::vector<IFSNode>& nodes, const FunctionBall& ball,
                                       const MonotonicityCertificate& cert,
                                       const RenormConstants& consts, double inverse_tol) {
    const int n = generation_of(nodes);
    if (n >= 31) throw Error("expand_generation: symbol index width exhausted");
    const std::size_t size = nodes.size();
    const Interval abs_alpha_inv = abs_(consts.alpha_inv);

    std::vector<IFSNode> children(2 * size);
    for (std::size_t i = 0; i < size; ++i) {
        const IFSNode& parent = nodes[i];

        // Symbol 0: scale by alpha_inv < 0, which swaps endpoint order.  The
        // new chain-rule factor is the constant |alpha_inv| at both ends.
        IFSNode& c0 = children[i];
        c0.sigma = parent.sigma;
        c0.left_pt = psi0(parent.right_pt, consts);
        c0.right_pt = psi0(parent.left_pt, consts);
        c0.deriv_sup = mul_up(parent.deriv_sup, abs_alpha_inv.hi);
        c0.deriv_inf = mul_down(parent.deriv_inf, abs_alpha_inv.lo);
        check_child(c0, n + 1);

        // Symbol 1: order-preserving inverse branch.  Each endpoint's image
        // X also carries the new factor |alpha_inv / g'(X)|; the supremum
        // and infimum of that factor over the node sit at these endpoints
        // because the factor is monotone along the node.
        IFSNode& c1 = children[size + i];
        c1.sigma = static_cast<std::uint32_t>((std::uint32_t{1} << n) | parent.sigma);
        InverseQuery ql{mul(consts.alpha_inv, parent.left_pt), inverse_tol};
        InverseQuery qr{mul(consts.alpha_inv, parent.right_pt), inverse_tol};
        const Interval img_left = invert(ball, cert, ql);
        const Interval img_right = invert(ball, cert, qr);
        c1.left_pt = img_left;
        c1.right_pt = img_right;
        const Interval fac_left = abs_(div(consts.alpha_inv, eval_deriv(ball, img_left)));
        const Interval fac_right = abs_(div(consts.alpha_inv, eval_deriv(ball, img_right)));
        c1.deriv_sup = mul_up(parent.deriv_sup, std::max(fac_left.hi, fac_right.hi));
        c1.deriv_inf = mul_down(parent.deriv_inf, std::min(fac_left.lo, fac_right.lo));
        check_child(c1, n + 1);
    }
    return children;
}

ContractionBounds contraction_bounds(const IFSNode& node) {
    if (!std::isfinite(node.deriv_sup) || !std::isfinite(node.deriv_inf) ||
        !(node.deriv_inf > 0.0) || !(node.deriv_sup < 1.0) || node.deriv_inf > node.deriv_sup) {
        throw ContractionViolation("contraction_bounds: derivative carriers left (0, 1)");
    }
    ContractionBounds out;
    out.c_sigma = Interval(node.deriv_sup, node.deriv_sup);
    out.d_sigma = Interval(node.deriv_inf, node.deriv_inf);
    return out;
}

double solve_partition(const std::vector<Interval>& values, PartitionSide side) {
    if (values.empty()) throw NoRoot("solve_partition: empty value list");
    std::vector<Interval> logs;
    logs.reserve(values.size());
    for (const Interval& v : values) {
        if (!std::isfinite(v.lo) || !std::isfinite(v.hi) || !(v.lo > 0.0) || !(v.hi < 1.0) ||
            v.lo > v.hi) {
            throw NoRoot("solve_partition: values must lie strictly inside (0, 1)");
        }
        logs.push_back(log_enc(v));  // hoisted: each bisection step only exponentiates
    }

    const auto sum_at = [&logs](double s) {
        const Interval S(s, s);
        std::vector<Interval> terms;
        terms.reserve(logs.size());
        for (const Interval& L : logs) terms.push_back(exp_enc(mul(L, S)));
        return reduce_sum(std::move(terms));
    };
    // upper: certified once the rounded-up sum is <= 1 (true for large s);
    // lower: certified once the rounded-down sum is >= 1 (true near s = 0).
    const auto certified = [&sum_at, side](double s) {
        const Interval S = sum_at(s);
        return side == PartitionSide::upper ? (S.hi <= 1.0) : (S.lo >= 1.0);
    };

    constexpr double kTol = 1e-12;
    double good = (side == PartitionSide::upper) ? 2.0 : 0.0;
    double bad = (side == PartitionSide::upper) ? 0.0 : 2.0;
    if (!certified(good)) {
        throw NoRoot("solve_partition: no certified root in [0, 2]");
    }
    while (std::abs(good - bad) > kTol) {
        const double m = 0.5 * (good + bad);
        if (m == good || m == bad) break;  // double spacing reached
        if (certified(m)) {
            good = m;
        } else {
            bad = m;
        }
    }
    if (std::abs(good - bad) > kTol) {
        throw ToleranceFloor("solve_partition: bisection stalled above tolerance");
    }
    return good;
}

std::vector<DimensionBounds> dimension_run(
    const FunctionBall& ball, const MonotonicityCertificate& cert, const RenormConstants& consts,
    int generations, double inverse_tol,
    const std::function<void(const DimensionBounds&)>& on_generation, std::string* abort_reason) {
    if (generations < 1 || generations > 22) {
        throw Error("dimension_run: generations must lie in [1, 22]");
    }
    if (cert.ball_checksum != ball_checksum(ball)) {
        throw ChecksumMismatch("dimension_run: certificate was built for a different ball");
    }
    if (abort_reason != nullptr) abort_reason->clear();

    std::vector<DimensionBounds> series;
    series.reserve(static_cast<std::size_t>(generations));
    std::vector<IFSNode> nodes{root_node(consts)};
    for (int gen = 1; gen <= generations; ++gen) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            nodes = expand_generation(nodes, ball, cert, consts, inverse_tol);
        } catch (const ContractionViolation& e) {
            if (abort_reason != nullptr) *abort_reason = e.what();
            return series;
        } catch (const RigorAbort& e) {
            if (abort_reason != nullptr) *abort_reason = e.what();
            return series;
        }

        std::vector<Interval> sup_values, inf_values;
        sup_values.reserve(nodes.size());
        inf_values.reserve(nodes.size());
        double max_width = 0.0;
        for (const IFSNode& node : nodes) {
            const ContractionBounds cb = contraction_bounds(node);
            sup_values.push_back(cb.c_sigma);
            inf_values.push_back(cb.d_sigma);
            max_width = std::max({max_width, width(node.left_pt), width(node.right_pt)});
        }

        DimensionBounds row;
        row.generation = gen;
        row.s_n = solve_partition(sup_values, PartitionSide::upper);
        row.r_n = solve_partition(inf_values, PartitionSide::lower);
        row.node_count = static_cast<std::int64_t>(nodes.size());
        row.max_endpoint_width = max_width;
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        series.push_back(row);
        if (on_generation) on_generation(row);
    }
    return series;
}

}  // namespace feigdim
