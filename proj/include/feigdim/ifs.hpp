#pragma once

// The two-map iterated function system built from the fixed point and the
// rigorous dimension brackets extracted from it.
//
// Maps on I = [alpha^{-1}, 1]:
//   psi0(x) = alpha^{-1} x                    (order-reversing, |psi0'| = |alpha^{-1}|)
//   psi1(x) = g^{-1}(alpha^{-1} x)            (order-preserving)
// A length-n word sigma = a_{n-1}...a_1a_0 composes outermost-first:
// Psi_sigma = Psi_{a_{n-1}} o ... o Psi_{a_0}, and its interval is
// I_sigma = Psi_sigma(I).  Each generation applies one more outer symbol to
// every node, so children inherit everything from their parent plus one new
// derivative factor evaluated at the parent's endpoint enclosures.
//
// Contraction bookkeeping.  The chain rule writes |Psi'_sigma(z)| as a
// product of factors F_k(z) = |Psi'_{a_k}(w_k(z))|, where w_k is the partial
// composition below symbol k.  Under the monotonicity certificate each
// factor is monotone in z (a monotone map composed with a monotone
// derivative), so each factor attains its supremum and infimum over I at
// z-endpoints -- but different factors may peak at opposite endpoints, so
// the product of the per-factor endpoint extremes is the sound bound:
//   sup_z prod_k F_k(z) <= prod_k max(F_k(left), F_k(right)) =: deriv_sup
//   inf_z prod_k F_k(z) >= prod_k min(F_k(left), F_k(right)) =: deriv_inf
// Nodes therefore carry two directed-rounded scalar products, updated with
// one new factor per generation; evaluating the full product at the two
// endpoints alone would not bound the interior of mixed words.
//
// Dimension brackets.  With c_sigma = deriv_sup and d_sigma = deriv_inf over
// a complete generation, the roots of sum c^s = 1 and sum d^r = 1 bracket
// the Hausdorff dimension of the attractor; solve_partition returns the
// rigorous side of each root by interval bisection.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "feigdim/function_ball.hpp"
#include "feigdim/interval.hpp"
#include "feigdim/inverse.hpp"
#include "feigdim/monotonicity.hpp"
#include "feigdim/renormalization.hpp"

namespace feigdim {

class NodeOrderViolation : public Error {
    using Error::Error;
};

class ContractionViolation : public Error {
    using Error::Error;
};

// Endpoint enclosures grew past the rigor budget; bounds would degrade
// super-linearly, so the run stops instead.
class RigorAbort : public Error {
    using Error::Error;
};

class NoRoot : public Error {
    using Error::Error;
};

class ToleranceFloor : public Error {
    using Error::Error;
};

struct IFSNode {
    // bit k holds the symbol applied at expansion step k+1, so the most
    // significant used bit is the outermost map; a node's sigma equals its
    // index within its generation's node vector
    std::uint32_t sigma = 0;
    Interval left_pt;   // enclosure of the left endpoint of I_sigma
    Interval right_pt;  // enclosure of the right endpoint of I_sigma
    double deriv_sup = 1.0;  // rounded-up product of per-factor suprema
    double deriv_inf = 1.0;  // rounded-down product of per-factor infima
};

// Word of a generation-n node, outermost symbol first (e.g. "01").
std::string symbol_string(std::uint32_t sigma, int generation);

struct ContractionBounds {
    Interval c_sigma;  // upper Lipschitz bound, hi < 1
    Interval d_sigma;  // lower Lipschitz bound, lo > 0
};

struct DimensionBounds {
    int generation = 0;
    double r_n = 0.0;  // rigorous lower bound of the dimension
    double s_n = 0.0;  // rigorous upper bound
    std::int64_t node_count = 0;
    double max_endpoint_width = 0.0;
    double wall_seconds = 0.0;
};

// The identity word: I itself with unit derivative carriers.
IFSNode root_node(const RenormConstants& consts);

Interval psi0(const Interval& X, const RenormConstants& consts);
Interval psi1(const Interval& X, const FunctionBall& ball, const MonotonicityCertificate& cert,
              double tol = 1e-14);

// |psi1'| as an enclosure at a near-point interval x: alpha^{-1}/g'(psi1(x)),
// positive because both factors are negative.
Interval psi1_deriv(const Interval& x, const FunctionBall& ball,
                    const MonotonicityCertificate& cert, double tol = 1e-14);

// One generation step: every node spawns its symbol-0 child (index kept) and
// symbol-1 child (index + 2^n); endpoint images via the maps above with the
// psi0 orientation swap, carriers extended by the new factor's endpoint
// extremes.  Throws NodeOrderViolation if an enclosure pair comes out in the
// wrong order, ContractionViolation if a carrier leaves (0, 1), RigorAbort
// if an endpoint enclosure grows wider than 1e-8.
std::vector<IFSNode> expand_generation(const std::vector<IFSNode>& nodes, const FunctionBall& ball,
                                       const MonotonicityCertificate& cert,
                                       const RenormConstants& consts, double inverse_tol);

// The node's carriers as a two-sided Lipschitz bracket for the node's map;
// throws ContractionViolation outside (0, 1).
ContractionBounds contraction_bounds(const IFSNode& node);

enum class PartitionSide { upper, lower };

// Rigorous one-sided root of sum_i values[i]^s = 1 by bisection over [0, 2]:
// upper side returns s with interval-sum hi <= 1 proven, lower side returns
// r with interval-sum lo >= 1 proven.  Bisection tolerance 1e-12.  Inputs
// must lie strictly inside (0, 1); otherwise NoRoot.
double solve_partition(const std::vector<Interval>& values, PartitionSide side);

// Full pipeline: expand generation by generation, solve both partition sides
// each time, invoke on_generation as each row completes (for streaming
// output).  Refuses a certificate whose ball checksum mismatches
// (ChecksumMismatch).  On ContractionViolation or RigorAbort the run stops
// cleanly, stores the reason in *abort_reason when given, and returns the
// generations finished so far.
std::vector<DimensionBounds> dimension_run(
    const FunctionBall& ball, const MonotonicityCertificate& cert, const RenormConstants& consts,
    int generations, double inverse_tol,
    const std::function<void(const DimensionBounds&)>& on_generation = nullptr,
    std::string* abort_reason = nullptr);

}  // namespace feigdim
