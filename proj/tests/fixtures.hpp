#pragma once

// Shared, lazily built per-degree fixtures for the test binaries.  Building a
// fixed-point ball runs two Newton solves plus tail diagnostics (seconds for
// d=4), so every test TU draws from this one program-wide cache instead of
// rebuilding.  The inline functions keep a single static cache across TUs.

#include <map>

#include "feigdim/function_ball.hpp"
#include "feigdim/monotonicity.hpp"
#include "feigdim/renormalization.hpp"

namespace testfix {

struct DegreeFixture {
    feigdim::RenormConfig cfg;
    feigdim::NewtonResult nr;
    feigdim::FunctionBall ball;
    feigdim::RenormConstants rc;
};

inline const DegreeFixture& fixture(int d) {
    static std::map<int, DegreeFixture> cache;
    auto it = cache.find(d);
    if (it == cache.end()) {
        DegreeFixture f;
        f.cfg = feigdim::default_renorm_config(d);
        f.nr = feigdim::newton_fixpoint(f.cfg);
        f.ball = feigdim::build_fixed_point_ball(f.cfg, 1e-9);
        f.rc = feigdim::alpha_of(f.ball);
        it = cache.emplace(d, std::move(f)).first;
    }
    return it->second;
}

inline const feigdim::MonotonicityCertificate& certificate(int d) {
    static std::map<int, feigdim::MonotonicityCertificate> cache;
    auto it = cache.find(d);
    if (it == cache.end()) {
        int depth = feigdim::default_max_depth(d);
        it = cache.emplace(d, feigdim::build_certificate(fixture(d).ball, depth, depth)).first;
    }
    return it->second;
}

// The ball center as a radius-zero ball: evaluating it encloses the center
// polynomial tightly, which several oracles compare against.
inline feigdim::FunctionBall center_only(const feigdim::FunctionBall& ball) {
    feigdim::FunctionBall c = ball;
    c.radius = 0.0;
    for (auto& coeff : c.coeffs) coeff = feigdim::Interval(feigdim::midpoint(coeff));
    c.provenance.source = "center of " + ball.provenance.source;
    return c;
}

}  // namespace testfix
