#pragma once

// Run configuration for the command-line pipeline: built-in per-degree
// profiles, flat key=value config files, and validation.  Precedence is
// flags over file over built-ins; fields left at their zero sentinel are
// resolved to the degree-tuned default at use time.

#include <string>

#include "feigdim/interval.hpp"
#include "feigdim/renormalization.hpp"

namespace feigdim {

struct RunConfig {
    int degree_d = 0;      // required: 2, 3, or 4 (0 = not yet provided)
    int truncation_N = 0;  // 0: per-degree default
    double rho = 0.0;      // 0: per-degree default
    double radius = 1e-9;
    int generations = 20;
    int max_depth = 0;  // subdivision cap for sign certificates; 0: per-degree default
    double newton_tol = 1e-11;
    double inverse_tol = 1e-14;
    // The partition solver's bisection tolerance is compiled in at 1e-12 so
    // that published brackets are comparable across runs; the knob is
    // accepted for config-file compatibility and must stay positive.
    double partition_tol = 1e-12;
    int threads = 0;        // 0: auto.  The pipeline is sequential; accepted for
                            // interface stability and determinism checks.
    std::string ball_path;  // empty: feigdim_d{degree}.ball
    std::string cert_path;  // empty: feigdim_d{degree}.cert.json
    std::string out_path;   // empty: stdout (dimension) / feigdim_d{degree}_fig (figures)
};

// Flat config file: one `key = value` per line, '#' starts a comment, keys
// named after the long flags without the leading dashes (degree, truncation,
// rho, radius, generations, max-depth, tol-newton, tol-inverse,
// tol-partition, threads, ball, cert, out).  Unknown keys are errors.
RunConfig parse_config_file(const std::string& path);

// Throws Error with a usage-grade message on any out-of-range field.
void validate_config(const RunConfig& cfg);

// Degree profile with the config's overrides applied.
RenormConfig renorm_config_of(const RunConfig& cfg);

int resolved_max_depth(const RunConfig& cfg);
std::string resolved_ball_path(const RunConfig& cfg);
std::string resolved_cert_path(const RunConfig& cfg);
std::string resolved_figures_prefix(const RunConfig& cfg);

}  // namespace feigdim
