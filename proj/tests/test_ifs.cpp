// Tests for the two-map IFS: map/derivative enclosures, generation
// expansion bookkeeping, contraction carriers, the partition-function
// solver, and the end-to-end dimension brackets.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "feigdim/function_ball.hpp"
#include "feigdim/ifs.hpp"
#include "feigdim/interval.hpp"
#include "feigdim/inverse.hpp"
#include "feigdim/monotonicity.hpp"
#include "feigdim/renormalization.hpp"
#include "fixtures.hpp"

using namespace feigdim;
using testfix::certificate;
using testfix::fixture;

namespace {

// Reference dimension values the brackets must straddle.
constexpr double kDimQuadratic = 0.538045143580549911671415567;
constexpr double kDimCubic = 0.606;
constexpr double kDimQuartic = 0.642575065;

Interval node_hull(const IFSNode& n) { return hull(n.left_pt, n.right_pt); }

std::vector<IFSNode> expand_times(int d, int generations) {
    const auto& f = fixture(d);
    std::vector<IFSNode> nodes;
    nodes.push_back(root_node(f.rc));
    for (int k = 0; k < generations; ++k) {
        nodes = expand_generation(nodes, f.ball, certificate(d), f.rc, 1e-14);
    }
    return nodes;
}

}  // namespace

TEST_CASE("symbol strings decode outermost symbol first") {
    CHECK(symbol_string(0, 0) == "");
    CHECK(symbol_string(0, 1) == "0");
    CHECK(symbol_string(1, 1) == "1");
    // generation 2, index 1: outer bit 0, inner bit 1
    CHECK(symbol_string(1, 2) == "01");
    CHECK(symbol_string(2, 2) == "10");
    CHECK(symbol_string(3, 2) == "11");
    CHECK(symbol_string(0b101, 3) == "101");
    CHECK_THROWS_AS(symbol_string(0, 32), Error);
    CHECK_THROWS_AS(symbol_string(0, -1), Error);
}

TEST_CASE("root node spans the fundamental interval with unit carriers") {
    const auto& f = fixture(2);
    IFSNode root = root_node(f.rc);
    CHECK(root.sigma == 0);
    CHECK(root.left_pt.lo == f.rc.alpha_inv.lo);
    CHECK(root.left_pt.hi == f.rc.alpha_inv.hi);
    CHECK(root.right_pt.lo == 1.0);
    CHECK(root.right_pt.hi == 1.0);
    CHECK(root.deriv_sup == 1.0);
    CHECK(root.deriv_inf == 1.0);

    RenormConstants bad = f.rc;
    bad.alpha_inv = Interval(0.25, 0.5);
    CHECK_THROWS_AS(root_node(bad), Error);
}

TEST_CASE("psi0 scales by alpha_inv and reverses order") {
    const auto& f = fixture(2);
    const Interval zero = psi0(Interval(0.0), f.rc);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi == 0.0);

    const Interval at_one = psi0(Interval(1.0), f.rc);
    CHECK(at_one.lo <= f.rc.alpha_inv.lo);
    CHECK(at_one.hi >= f.rc.alpha_inv.hi);
    CHECK(width(at_one) <= width(f.rc.alpha_inv) + 1e-15);

    // order reversal: x < y maps to psi0(x) > psi0(y)
    const Interval lo_img = psi0(Interval(0.9), f.rc);
    const Interval hi_img = psi0(Interval(0.2), f.rc);
    CHECK(lo_img.hi < hi_img.lo);

    const Interval dpsi0 = abs_(f.rc.alpha_inv);
    CHECK(dpsi0.lo > 0.0);
    CHECK(dpsi0.hi < 1.0);
}

TEST_CASE("psi1 is the order-preserving inverse branch into J") {
    for (int d : {2, 3, 4}) {
        CAPTURE(d);
        const auto& f = fixture(d);
        const auto& cert = certificate(d);

        // psi1(1) = g^{-1}(alpha_inv) = 1: the right fixed endpoint
        const Interval at_one = psi1(Interval(1.0), f.ball, cert);
        CHECK(contains(at_one, 1.0));
        CHECK(width(at_one) <= 1e-8);

        // psi1(alpha_inv) = g^{-1}(alpha_inv^2) = g(g(1)), the left end of J
        const Interval at_left = psi1(f.rc.alpha_inv, f.ball, cert);
        const Interval gg1 = eval(f.ball, f.rc.alpha_inv);
        CHECK(intersect(at_left, gg1).has_value());

        // images stay inside the inversion domain J
        CHECK(at_one.hi <= cert.J.hi);
        CHECK(at_left.lo >= cert.J.lo - 1e-12);

        // order preserving with real separation for separated inputs
        const Interval a = psi1(Interval(-0.2), f.ball, cert);
        const Interval b = psi1(Interval(0.4), f.ball, cert);
        CHECK(a.hi < b.lo);
    }
}

TEST_CASE("psi1 rejects arguments far outside the fundamental interval") {
    const auto& f = fixture(2);
    CHECK_THROWS_AS(psi1(Interval(3.0), f.ball, certificate(2)), RangeError);
}

TEST_CASE("psi1_deriv is positive, below one, and decreasing along I") {
    for (int d : {2, 3, 4}) {
        CAPTURE(d);
        const auto& f = fixture(d);
        const auto& cert = certificate(d);

        const Interval at_left = psi1_deriv(f.rc.alpha_inv, f.ball, cert);
        const Interval at_right = psi1_deriv(Interval(1.0), f.ball, cert);
        CHECK(at_left.lo > 0.0);
        CHECK(at_left.hi < 1.0);
        CHECK(at_right.lo > 0.0);
        CHECK(at_right.hi < 1.0);
        // strictly decreasing in x across the interval
        CHECK(at_left.lo > at_right.hi);

        // 50 interior samples stay inside the endpoint bracket
        const double x0 = midpoint(f.rc.alpha_inv);
        std::mt19937_64 rng(777 + static_cast<unsigned>(d));
        std::uniform_real_distribution<double> uni(x0 + 1e-6, 1.0 - 1e-6);
        for (int k = 0; k < 50; ++k) {
            const Interval v = psi1_deriv(Interval(uni(rng)), f.ball, cert);
            CHECK(v.hi <= at_left.hi + 1e-9);
            CHECK(v.lo >= at_right.lo - 1e-9);
        }
    }
}

TEST_CASE("psi1_deriv matches the quotient of alpha_inv by g' at the image") {
    const auto& f = fixture(3);
    const auto& cert = certificate(3);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(midpoint(f.rc.alpha_inv) + 1e-6, 1.0 - 1e-6);
    for (int k = 0; k < 20; ++k) {
        const Interval x(uni(rng));
        const Interval via_op = psi1_deriv(x, f.ball, cert);
        const Interval via_quotient =
            abs_(div(f.rc.alpha_inv, eval_deriv(f.ball, psi1(x, f.ball, cert))));
        CHECK(intersect(via_op, via_quotient).has_value());
        // the two enclosure routes agree to enclosure noise
        CHECK(std::abs(midpoint(via_op) - midpoint(via_quotient)) <= 1e-9);
    }
}

TEST_CASE("generation one reproduces the two fundamental subintervals") {
    for (int d : {2, 3, 4}) {
        CAPTURE(d);
        const auto& f = fixture(d);
        auto g1 = expand_times(d, 1);
        REQUIRE(g1.size() == 2);
        CHECK(g1[0].sigma == 0);
        CHECK(g1[1].sigma == 1);

        // I_0 = psi0(I) = [alpha_inv, alpha_inv^2]
        CHECK(intersect(g1[0].left_pt, f.rc.alpha_inv).has_value());
        CHECK(intersect(g1[0].right_pt, mul(f.rc.alpha_inv, f.rc.alpha_inv)).has_value());
        // symbol 0 factor is |alpha_inv| exactly at both ends
        CHECK(g1[0].deriv_sup == doctest::Approx(abs_(f.rc.alpha_inv).hi).epsilon(1e-14));
        CHECK(g1[0].deriv_inf == doctest::Approx(abs_(f.rc.alpha_inv).lo).epsilon(1e-14));

        // I_1 = psi1(I) = [g(g(1)), 1]
        const auto& cert = certificate(d);
        CHECK(g1[1].left_pt.lo >= cert.J.lo - 1e-12);
        CHECK(g1[1].left_pt.hi <= cert.J.lo + 1e-7);
        CHECK(g1[1].right_pt.hi == 1.0);
        CHECK(g1[1].right_pt.lo >= 1.0 - 1e-8);

        // I_0 and I_1 are far apart: the fundamental gap
        CHECK(g1[0].right_pt.hi < g1[1].left_pt.lo);

        // carriers lie strictly inside (0, 1), sup >= inf
        for (const auto& nd : g1) {
            CHECK(nd.deriv_inf > 0.0);
            CHECK(nd.deriv_sup < 1.0);
            CHECK(nd.deriv_inf <= nd.deriv_sup);
        }
    }
}

TEST_CASE("quadratic generation-one carriers match frozen values") {
    auto g1 = expand_times(2, 1);
    CHECK(g1[0].deriv_sup == doctest::Approx(0.39953528152313494).epsilon(1e-12));
    CHECK(g1[0].deriv_inf == doctest::Approx(0.39953527952313378).epsilon(1e-12));
    CHECK(g1[1].deriv_sup == doctest::Approx(0.19033482799414753).epsilon(1e-12));
    CHECK(g1[1].deriv_inf == doctest::Approx(0.15962843980866892).epsilon(1e-12));
}

TEST_CASE("scratch chain-rule recomputation matches expansion carriers") {
    // Rebuild every node at generations <= 4 symbol by symbol through the
    // public map/derivative operations and compare carriers and endpoints.
    for (int d : {2, 4}) {
        CAPTURE(d);
        const auto& f = fixture(d);
        const auto& cert = certificate(d);
        const Interval abs_ai = abs_(f.rc.alpha_inv);
        for (int n = 1; n <= 4; ++n) {
            auto nodes = expand_times(d, n);
            REQUIRE(nodes.size() == (std::size_t{1} << n));
            for (const auto& node : nodes) {
                Interval L = f.rc.alpha_inv;
                Interval R(1.0);
                double dsup = 1.0, dinf = 1.0;
                for (int k = 0; k < n; ++k) {
                    if (((node.sigma >> k) & 1u) == 0) {
                        const Interval newL = psi0(R, f.rc);
                        const Interval newR = psi0(L, f.rc);
                        L = newL;
                        R = newR;
                        dsup = mul_up(dsup, abs_ai.hi);
                        dinf = mul_down(dinf, abs_ai.lo);
                    } else {
                        const Interval fl = psi1_deriv(L, f.ball, cert);
                        const Interval fr = psi1_deriv(R, f.ball, cert);
                        const Interval newL = psi1(L, f.ball, cert);
                        const Interval newR = psi1(R, f.ball, cert);
                        L = newL;
                        R = newR;
                        dsup = mul_up(dsup, std::max(fl.hi, fr.hi));
                        dinf = mul_down(dinf, std::min(fl.lo, fr.lo));
                    }
                }
                CAPTURE(symbol_string(node.sigma, n));
                CHECK(node.deriv_sup == doctest::Approx(dsup).epsilon(1e-13));
                CHECK(node.deriv_inf == doctest::Approx(dinf).epsilon(1e-13));
                CHECK(std::abs(node.left_pt.lo - L.lo) <= 1e-13);
                CHECK(std::abs(node.right_pt.hi - R.hi) <= 1e-13);
            }
        }
    }
}

TEST_CASE("sampled word derivatives stay inside the carrier bracket") {
    // Soundness: |Psi'_sigma| at interior points never exceeds deriv_sup nor
    // undercuts deriv_inf.  Chain products are evaluated pointwise through
    // the public operations.
    struct Probe {
        int d;
        int n;
        int samples;
    };
    for (const Probe p : {Probe{2, 4, 50}, Probe{4, 3, 30}}) {
        CAPTURE(p.d);
        CAPTURE(p.n);
        const auto& f = fixture(p.d);
        const auto& cert = certificate(p.d);
        const Interval abs_ai = abs_(f.rc.alpha_inv);
        auto nodes = expand_times(p.d, p.n);
        std::mt19937_64 rng(1234 + static_cast<unsigned>(p.d));
        std::uniform_real_distribution<double> uni(midpoint(f.rc.alpha_inv) + 1e-9, 1.0 - 1e-9);
        for (const auto& node : nodes) {
            CAPTURE(symbol_string(node.sigma, p.n));
            for (int k = 0; k < p.samples; ++k) {
                Interval z(uni(rng));
                Interval prod(1.0);
                for (int j = 0; j < p.n; ++j) {
                    if (((node.sigma >> j) & 1u) == 0) {
                        prod = mul(prod, abs_ai);
                        z = psi0(z, f.rc);
                    } else {
                        prod = mul(prod, psi1_deriv(z, f.ball, cert));
                        z = psi1(z, f.ball, cert);
                    }
                }
                // a sound carrier bracket leaves [prod] poking out only by
                // its own enclosure noise
                CHECK(prod.lo <= node.deriv_sup + 1e-12);
                CHECK(prod.hi >= node.deriv_inf - 1e-12);
            }
        }
    }
}

TEST_CASE("dropping the innermost symbol encloses the child interval") {
    // The word without its innermost symbol is sigma >> 1 one generation
    // earlier; applying one fewer inner map can only grow the interval.
    const auto& f = fixture(3);
    const auto& cert = certificate(3);
    std::vector<std::vector<IFSNode>> gens;
    gens.push_back({root_node(f.rc)});
    for (int n = 1; n <= 6; ++n) {
        gens.push_back(expand_generation(gens.back(), f.ball, cert, f.rc, 1e-14));
    }
    for (int n = 2; n <= 6; ++n) {
        for (const auto& node : gens[static_cast<std::size_t>(n)]) {
            const IFSNode& shorter = gens[static_cast<std::size_t>(n - 1)][node.sigma >> 1];
            const Interval inner = node_hull(node);
            const Interval outer = node_hull(shorter);
            CAPTURE(n);
            CAPTURE(symbol_string(node.sigma, n));
            CHECK(inner.lo >= outer.lo - 1e-9);
            CHECK(inner.hi <= outer.hi + 1e-9);
        }
    }
}

TEST_CASE("generation intervals are pairwise disjoint through generation six") {
    for (int d : {2, 4}) {
        CAPTURE(d);
        for (int n = 1; n <= 6; ++n) {
            auto nodes = expand_times(d, n);
            std::sort(nodes.begin(), nodes.end(), [](const IFSNode& a, const IFSNode& b) {
                return a.left_pt.lo < b.left_pt.lo;
            });
            for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
                CAPTURE(n);
                CAPTURE(i);
                CHECK(nodes[i].right_pt.hi <= nodes[i + 1].left_pt.lo + 1e-10);
            }
        }
    }
}

TEST_CASE("node endpoints meet the forward critical orbit") {
    // Endpoints of generation-n intervals lie on the forward orbit of the
    // critical point; check enclosure intersections through generation 3.
    const auto& f = fixture(2);
    const auto& cert = certificate(2);
    const OrbitEnclosure orbit = orbit_enclosures(f.ball, 17);
    std::vector<std::vector<IFSNode>> gens;
    gens.push_back({root_node(f.rc)});
    for (int n = 1; n <= 3; ++n) {
        gens.push_back(expand_generation(gens.back(), f.ball, cert, f.rc, 1e-14));
        const int limit = 1 << (n + 1);  // p_1 .. p_{2^{n+1}}
        for (const auto& node : gens.back()) {
            for (const Interval* ep : {&node.left_pt, &node.right_pt}) {
                bool met = false;
                for (int k = 1; k <= limit && !met; ++k) {
                    met = intersect(*ep, orbit.points[static_cast<std::size_t>(k)]).has_value();
                }
                CAPTURE(n);
                CAPTURE(symbol_string(node.sigma, n));
                CHECK(met);
            }
        }
    }
}

TEST_CASE("contraction bounds return the carriers as point intervals") {
    auto nodes = expand_times(2, 3);
    for (const auto& node : nodes) {
        const ContractionBounds cb = contraction_bounds(node);
        CHECK(cb.c_sigma.lo == node.deriv_sup);
        CHECK(cb.c_sigma.hi == node.deriv_sup);
        CHECK(cb.d_sigma.lo == node.deriv_inf);
        CHECK(cb.d_sigma.hi == node.deriv_inf);
        CHECK(cb.c_sigma.hi < 1.0);
        CHECK(cb.d_sigma.lo > 0.0);
        CHECK(cb.d_sigma.lo <= cb.c_sigma.hi);
    }

    IFSNode bad;
    bad.left_pt = Interval(0.0);
    bad.right_pt = Interval(0.5);
    bad.deriv_sup = 1.0;  // not a contraction
    bad.deriv_inf = 0.5;
    CHECK_THROWS_AS(contraction_bounds(bad), ContractionViolation);
    bad.deriv_sup = 0.5;
    bad.deriv_inf = 0.0;  // degenerate
    CHECK_THROWS_AS(contraction_bounds(bad), ContractionViolation);
    bad.deriv_inf = 0.7;  // inverted pair
    CHECK_THROWS_AS(contraction_bounds(bad), ContractionViolation);
}

TEST_CASE("expand_generation validates its input shape") {
    const auto& f = fixture(2);
    const auto& cert = certificate(2);
    std::vector<IFSNode> empty;
    CHECK_THROWS_AS(expand_generation(empty, f.ball, cert, f.rc, 1e-14), Error);

    auto three = expand_times(2, 2);
    three.pop_back();  // size 3: not a complete generation
    CHECK_THROWS_AS(expand_generation(three, f.ball, cert, f.rc, 1e-14), Error);

    auto swapped = expand_times(2, 1);
    std::swap(swapped[0], swapped[1]);  // sigma no longer matches index
    CHECK_THROWS_AS(expand_generation(swapped, f.ball, cert, f.rc, 1e-14), Error);
}

TEST_CASE("inverted parent endpoints raise NodeOrderViolation") {
    const auto& f = fixture(2);
    std::vector<IFSNode> bad;
    IFSNode parent = root_node(f.rc);
    std::swap(parent.left_pt, parent.right_pt);  // deliberately inverted
    bad.push_back(parent);
    CHECK_THROWS_AS(expand_generation(bad, f.ball, certificate(2), f.rc, 1e-14),
                    NodeOrderViolation);
}

TEST_CASE("over-wide endpoint enclosures raise RigorAbort") {
    const auto& f = fixture(2);
    std::vector<IFSNode> wide;
    IFSNode parent = root_node(f.rc);
    parent.left_pt = Interval(parent.left_pt.lo, parent.left_pt.lo + 1e-7);
    wide.push_back(parent);
    CHECK_THROWS_AS(expand_generation(wide, f.ball, certificate(2), f.rc, 1e-14), RigorAbort);
}

TEST_CASE("carrier underflow raises ContractionViolation during expansion") {
    const auto& f = fixture(2);
    std::vector<IFSNode> tiny;
    IFSNode parent = root_node(f.rc);
    parent.deriv_inf = std::numeric_limits<double>::denorm_min();
    parent.deriv_sup = 0.5;
    tiny.push_back(parent);
    CHECK_THROWS_AS(expand_generation(tiny, f.ball, certificate(2), f.rc, 1e-14),
                    ContractionViolation);
}

TEST_CASE("partition solver reproduces closed-form dimensions") {
    // two maps of ratio 1/2: root exactly 1
    {
        std::vector<Interval> v{Interval(0.5), Interval(0.5)};
        const double s = solve_partition(v, PartitionSide::upper);
        const double r = solve_partition(v, PartitionSide::lower);
        CHECK(std::abs(s - 1.0) <= 1e-9);
        CHECK(std::abs(r - 1.0) <= 1e-9);
        CHECK(s >= 1.0 - 1e-12);  // upper side certifies from above
        CHECK(r <= 1.0 + 1e-12);  // lower side certifies from below
        CHECK(r <= s + 1e-12);
    }
    // middle-thirds Cantor set: ln 2 / ln 3
    {
        const double kCantor = 0.6309297535714574370995271143427608542996;
        std::vector<Interval> v{Interval(1.0 / 3.0), Interval(1.0 / 3.0)};
        CHECK(std::abs(solve_partition(v, PartitionSide::upper) - kCantor) <= 1e-9);
        CHECK(std::abs(solve_partition(v, PartitionSide::lower) - kCantor) <= 1e-9);
    }
    // ratios 1/4 and 1/2: root ln(golden ratio)/ln 2
    {
        const double kGolden = 0.6942419136306173017387902668985952234636;
        std::vector<Interval> v{Interval(0.25), Interval(0.5)};
        CHECK(std::abs(solve_partition(v, PartitionSide::upper) - kGolden) <= 1e-9);
        CHECK(std::abs(solve_partition(v, PartitionSide::lower) - kGolden) <= 1e-9);
    }
}

TEST_CASE("partition solver outputs are certified after the fact") {
    const auto& f = fixture(2);
    auto nodes = expand_times(2, 4);
    std::vector<Interval> sups, infs;
    for (const auto& node : nodes) {
        const ContractionBounds cb = contraction_bounds(node);
        sups.push_back(cb.c_sigma);
        infs.push_back(cb.d_sigma);
    }
    const double s = solve_partition(sups, PartitionSide::upper);
    const double r = solve_partition(infs, PartitionSide::lower);
    CHECK(r <= s);

    // recompute both partition sums at the returned exponents through the
    // public power enclosure; soundness shows up as hi <= 1 / lo >= 1 up to
    // independent-enclosure noise
    Interval sum_s(0.0, 0.0);
    for (const auto& v : sups) sum_s = add(sum_s, pow_real(v, Interval(s)));
    CHECK(sum_s.hi <= 1.0 + 1e-12);
    Interval sum_r(0.0, 0.0);
    for (const auto& v : infs) sum_r = add(sum_r, pow_real(v, Interval(r)));
    CHECK(sum_r.lo >= 1.0 - 1e-12);
    (void)f;
}

TEST_CASE("partition solver rejects malformed inputs") {
    CHECK_THROWS_AS(solve_partition({}, PartitionSide::upper), NoRoot);
    CHECK_THROWS_AS(solve_partition({Interval(0.5), Interval(1.0)}, PartitionSide::upper), NoRoot);
    CHECK_THROWS_AS(solve_partition({Interval(0.0, 0.5)}, PartitionSide::lower), NoRoot);
    CHECK_THROWS_AS(solve_partition({Interval(1.2, 1.3)}, PartitionSide::upper), NoRoot);
}

TEST_CASE("dimension run brackets the quadratic reference at every generation") {
    const auto& f = fixture(2);
    std::vector<DimensionBounds> streamed;
    std::string reason = "sentinel";
    auto series = dimension_run(
        f.ball, certificate(2), f.rc, 8, 1e-14,
        [&streamed](const DimensionBounds& row) { streamed.push_back(row); }, &reason);
    REQUIRE(series.size() == 8);
    CHECK(reason.empty());  // cleared on a clean run
    REQUIRE(streamed.size() == 8);

    double prev_r = 0.0, prev_s = 2.0;
    for (const auto& row : series) {
        CAPTURE(row.generation);
        CHECK(row.node_count == (std::int64_t{1} << row.generation));
        CHECK(row.r_n <= kDimQuadratic);
        CHECK(row.s_n >= kDimQuadratic);
        CHECK(row.r_n >= prev_r - 1e-10);  // brackets tighten monotonically
        CHECK(row.s_n <= prev_s + 1e-10);
        CHECK(row.max_endpoint_width <= 5e-9);
        prev_r = row.r_n;
        prev_s = row.s_n;
    }
    // streaming callback saw the same rows in order
    for (std::size_t i = 0; i < streamed.size(); ++i) {
        CHECK(streamed[i].generation == series[i].generation);
        CHECK(streamed[i].r_n == series[i].r_n);
        CHECK(streamed[i].s_n == series[i].s_n);
    }

    // frozen regression values for the generation-8 bracket
    CHECK(series.back().r_n == doctest::Approx(0.53542685567481385).epsilon(1e-11));
    CHECK(series.back().s_n == doctest::Approx(0.54102390656044008).epsilon(1e-11));
}

TEST_CASE("dimension runs bracket the cubic and quartic references") {
    {
        const auto& f = fixture(3);
        auto series = dimension_run(f.ball, certificate(3), f.rc, 4, 1e-14);
        REQUIRE(series.size() == 4);
        for (const auto& row : series) {
            CHECK(row.r_n <= kDimCubic);
            CHECK(row.s_n >= kDimCubic);
        }
    }
    {
        const auto& f = fixture(4);
        auto series = dimension_run(f.ball, certificate(4), f.rc, 4, 1e-14);
        REQUIRE(series.size() == 4);
        for (const auto& row : series) {
            CHECK(row.r_n <= kDimQuartic);
            CHECK(row.s_n >= kDimQuartic);
        }
    }
}

TEST_CASE("dimension runs are bit-identical across repeats") {
    const auto& f = fixture(3);
    auto first = dimension_run(f.ball, certificate(3), f.rc, 5, 1e-14);
    auto second = dimension_run(f.ball, certificate(3), f.rc, 5, 1e-14);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].r_n == second[i].r_n);
        CHECK(first[i].s_n == second[i].s_n);
        CHECK(first[i].max_endpoint_width == second[i].max_endpoint_width);
    }
}

TEST_CASE("dimension run refuses a certificate from a different ball") {
    const auto& f2 = fixture(2);
    CHECK_THROWS_AS(dimension_run(f2.ball, certificate(3), f2.rc, 2, 1e-14), ChecksumMismatch);
}

TEST_CASE("dimension run rejects out-of-range generation counts") {
    const auto& f = fixture(2);
    CHECK_THROWS_AS(dimension_run(f.ball, certificate(2), f.rc, 0, 1e-14), Error);
    CHECK_THROWS_AS(dimension_run(f.ball, certificate(2), f.rc, 23, 1e-14), Error);
}

TEST_CASE("dimension run aborts cleanly when rigor is unattainable") {
    // a huge inversion tolerance blows endpoint enclosures past the width
    // budget in generation one; the run must stop with the reason recorded
    const auto& f = fixture(2);
    std::string reason;
    auto series = dimension_run(f.ball, certificate(2), f.rc, 8, 1e-2, nullptr, &reason);
    CHECK(series.empty());
    CHECK(reason.find("wider") != std::string::npos);
}
