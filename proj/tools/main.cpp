// feigdim: rigorous Hausdorff-dimension bounds for the period-doubling
// attractor.  Pipeline: fixpoint (solve g, write the function ball) ->
// verify (sign certificates, write the certificate) -> dimension (IFS
// bracket stream) / figures (rectangle-cover CSVs).
//
// Exit codes: 0 ok, 2 fixed-point solver did not converge, 3 sign
// certification inconclusive, 4 artifact integrity (checksums, corrupt
// files), 5 rigor abort (enclosure blow-up), 64 usage.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "feigdim/config.hpp"
#include "feigdim/function_ball.hpp"
#include "feigdim/ifs.hpp"
#include "feigdim/interval.hpp"
#include "feigdim/inverse.hpp"
#include "feigdim/monotonicity.hpp"
#include "feigdim/renormalization.hpp"

namespace {

using namespace feigdim;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f != nullptr && f != stdout) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_out(const std::string& path) {
    if (path.empty()) return FilePtr(stdout);
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw Error("cannot open output file '" + path + "'");
    return FilePtr(f);
}

int cmd_fixpoint(const RunConfig& cfg) {
    const RenormConfig rcfg = renorm_config_of(cfg);
    FunctionBall ball;
    try {
        ball = build_fixed_point_ball(rcfg, cfg.radius);
    } catch (const NoConvergence& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::fprintf(stderr, "best residual reached: %.6e\n", e.best_residual);
        return 2;
    }
    const RenormConstants consts = alpha_of(ball);
    const std::string path = resolved_ball_path(cfg);
    save_ball(ball, path);

    const auto alpha = format_outward(consts.alpha, 17);
    const auto alpha_inv = format_outward(consts.alpha_inv, 17);
    std::printf("ball: %s\n", path.c_str());
    std::printf("degree: %d  truncation: %d  rho: %.17g  radius: %.3e\n", ball.degree_d,
                ball.truncation_N, ball.rho, ball.radius);
    std::printf("newton residual (l1): %.6e\n", ball.provenance.residual_l1);
    std::printf("alpha in [%s, %s]\n", alpha.first.c_str(), alpha.second.c_str());
    std::printf("alpha_inv in [%s, %s]\n", alpha_inv.first.c_str(), alpha_inv.second.c_str());
    std::printf("checksum: %s\n", ball_checksum(ball).c_str());
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const FunctionBall ball = load_ball(resolved_ball_path(cfg));
    const int depth = resolved_max_depth(cfg);
    MonotonicityCertificate cert;
    try {
        cert = build_certificate(ball, depth, depth);
    } catch (const Inconclusive& e) {
        const auto sub = format_outward(e.subinterval, 17);
        std::fprintf(stderr, "inconclusive: %s\n", e.what());
        std::fprintf(stderr, "undecided subinterval: [%s, %s] at depth cap %d\n",
                     sub.first.c_str(), sub.second.c_str(), depth);
        return 3;
    }
    const std::string path = resolved_cert_path(cfg);
    save_certificate(cert, path);

    const auto J = format_outward(cert.J, 17);
    std::printf("certificate: %s\n", path.c_str());
    std::printf("degree: %d\n", cert.degree_d);
    std::printf("J in [%s, %s]\n", J.first.c_str(), J.second.c_str());
    std::printf("gprime_negative: %s\n", cert.gprime_negative ? "true" : "false");
    std::printf("gsecond_negative: %s\n", cert.gsecond_negative ? "true" : "false");
    std::printf("cover: %zu leaves, deepest subdivision %d (cap %d)\n", cert.cover.size(),
                cert.max_depth_used, depth);
    std::printf("min |g'| on J: %s\n", format_directed(cert.min_abs_gprime, 17, true).c_str());
    std::printf("ball checksum: %s\n", cert.ball_checksum.c_str());
    return 0;
}

// The CSV stream carries only run-reproducible bytes; wall-clock timing goes
// to stderr so identical configs produce identical files.
int cmd_dimension(const RunConfig& cfg) {
    const FunctionBall ball = load_ball(resolved_ball_path(cfg));
    const MonotonicityCertificate cert = load_certificate(resolved_cert_path(cfg));
    if (cert.ball_checksum != ball_checksum(ball)) {
        std::fprintf(stderr, "error: certificate %s was not built for ball %s\n",
                     resolved_cert_path(cfg).c_str(), resolved_ball_path(cfg).c_str());
        return 4;
    }
    if (cfg.partition_tol != 1e-12) {
        std::fprintf(stderr,
                     "note: partition solver tolerance is compiled in at 1e-12; "
                     "tol-partition=%g has no effect\n",
                     cfg.partition_tol);
    }
    const RenormConstants consts = alpha_of(ball);
    FilePtr out = open_out(cfg.out_path);

    std::fprintf(out.get(), "# feigdim dimension run\n");
    std::fprintf(out.get(), "# ball checksum %s\n", cert.ball_checksum.c_str());
    std::fprintf(out.get(), "# degree %d, generations %d\n", ball.degree_d, cfg.generations);
    std::fprintf(out.get(), "generation,r_lo,s_hi,node_count,max_endpoint_width\n");
    std::fflush(out.get());

    const auto stream_row = [&out](const DimensionBounds& row) {
        std::fprintf(out.get(), "%d,%s,%s,%lld,%s\n", row.generation,
                     format_directed(row.r_n, 17, true).c_str(),
                     format_directed(row.s_n, 17, false).c_str(),
                     static_cast<long long>(row.node_count),
                     format_directed(row.max_endpoint_width, 3, false).c_str());
        std::fflush(out.get());
        std::fprintf(stderr, "generation %d: %lld nodes, %.2fs\n", row.generation,
                     static_cast<long long>(row.node_count), row.wall_seconds);
    };

    std::string abort_reason;
    const auto series = dimension_run(ball, cert, consts, cfg.generations, cfg.inverse_tol,
                                      stream_row, &abort_reason);
    if (!abort_reason.empty()) {
        std::fprintf(stderr, "rigor abort: %s\n", abort_reason.c_str());
        std::fprintf(stderr, "partial results kept: %zu generations\n", series.size());
        return 5;
    }
    const DimensionBounds& last = series.back();
    std::printf("dimension within [%s, %s] (degree %d, generation %d, width <= %s)\n",
                format_directed(last.r_n, 17, true).c_str(),
                format_directed(last.s_n, 17, false).c_str(), ball.degree_d, last.generation,
                format_directed(last.s_n - last.r_n, 3, false).c_str());
    return 0;
}

int cmd_figures(const RunConfig& cfg) {
    const FunctionBall ball = load_ball(resolved_ball_path(cfg));
    const MonotonicityCertificate cert = load_certificate(resolved_cert_path(cfg));
    if (cert.ball_checksum != ball_checksum(ball)) {
        std::fprintf(stderr, "error: certificate %s was not built for ball %s\n",
                     resolved_cert_path(cfg).c_str(), resolved_ball_path(cfg).c_str());
        return 4;
    }
    const std::string prefix = resolved_figures_prefix(cfg);
    constexpr int kGrid = 64;
    constexpr CoverTag kTags[] = {CoverTag::g,    CoverTag::gprime,    CoverTag::gsecond,
                                  CoverTag::psi0, CoverTag::psi1,      CoverTag::psi0deriv,
                                  CoverTag::psi1deriv};
    for (const CoverTag tag : kTags) {
        const std::vector<CoverRectangle> rects = emit_cover_rectangles(ball, tag, kGrid);
        const std::string path = prefix + "_" + cover_tag_name(tag) + ".csv";
        FilePtr f = open_out(path);
        std::fprintf(f.get(), "x_lo,x_hi,y_lo,y_hi,tag,degree\n");
        for (const CoverRectangle& r : rects) {
            std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%s,%d\n", r.x.lo, r.x.hi, r.y.lo,
                         r.y.hi, cover_tag_name(tag), ball.degree_d);
        }
        std::size_t rows = rects.size();
        if (tag == CoverTag::gsecond) {
            // append the certificate's own cover so the plotted rectangles
            // are the certification record, not a re-derivation
            for (const SignLeaf& leaf : cert.cover) {
                std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%s,%d\n", leaf.x.lo, leaf.x.hi,
                             leaf.enclosure.lo, leaf.enclosure.hi, "gsecond_cert", ball.degree_d);
            }
            rows += cert.cover.size();
        }
        std::printf("wrote %s (%zu rectangles)\n", path.c_str(), rows);
    }
    return 0;
}

int dispatch(const std::string& command, const RunConfig& cfg) {
    try {
        validate_config(cfg);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 64;
    }
    try {
        if (command == "fixpoint") return cmd_fixpoint(cfg);
        if (command == "verify") return cmd_verify(cfg);
        if (command == "dimension") return cmd_dimension(cfg);
        if (command == "figures") return cmd_figures(cfg);
        std::fprintf(stderr, "error: unknown command '%s'\n", command.c_str());
        return 64;
    } catch (const NoConvergence& e) {
        std::fprintf(stderr, "error: %s (best residual %.6e)\n", e.what(), e.best_residual);
        return 2;
    } catch (const Inconclusive& e) {
        const auto sub = format_outward(e.subinterval, 17);
        std::fprintf(stderr, "inconclusive: %s on [%s, %s]\n", e.what(), sub.first.c_str(),
                     sub.second.c_str());
        return 3;
    } catch (const ChecksumMismatch& e) {
        std::fprintf(stderr, "integrity error: %s\n", e.what());
        return 4;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "integrity error: %s\n", e.what());
        return 4;
    } catch (const ContractionViolation& e) {
        std::fprintf(stderr, "rigor abort: %s\n", e.what());
        return 5;
    } catch (const RigorAbort& e) {
        std::fprintf(stderr, "rigor abort: %s\n", e.what());
        return 5;
    } catch (const DomainExceeded& e) {
        std::fprintf(stderr, "rigor abort: %s\n", e.what());
        return 5;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    // Pre-scan for --config only: file values form the base layer that
    // explicit flags then override in the real parse below.
    std::string config_path;
    {
        CLI::App pre{""};
        pre.allow_extras();
        pre.set_help_flag();  // keep --help for the main parser
        pre.add_option("--config", config_path);
        try {
            pre.parse(argc, argv);
        } catch (const CLI::ParseError&) {
            // the main parse reports the error with full context
        }
    }

    RunConfig cfg;
    if (!config_path.empty()) {
        try {
            cfg = parse_config_file(config_path);
        } catch (const Error& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 64;
        }
    }

    CLI::App app{"rigorous Hausdorff-dimension bounds for the period-doubling attractor"};
    app.require_subcommand(1);
    std::string config_again;
    app.add_option("--config", config_again, "flat key=value config file (flags override it)");
    app.add_option("--degree", cfg.degree_d, "critical-point degree: 2, 3, or 4 (required)");
    app.add_option("--truncation", cfg.truncation_N,
                   "series truncation order (0 = degree default)");
    app.add_option("--rho", cfg.rho, "coefficient-scale radius (0 = degree default)");
    app.add_option("--radius", cfg.radius, "function-ball radius (default 1e-9)");
    app.add_option("--generations", cfg.generations, "IFS generations to expand (default 20)");
    app.add_option("--max-depth", cfg.max_depth,
                   "sign-certificate subdivision cap (0 = degree default)");
    app.add_option("--tol-newton", cfg.newton_tol, "fixed-point residual target (default 1e-11)");
    app.add_option("--tol-inverse", cfg.inverse_tol,
                   "inverse-bracket refinement tolerance (default 1e-14)");
    app.add_option("--tol-partition", cfg.partition_tol,
                   "partition-solver tolerance (informational; compiled in at 1e-12)");
    app.add_option("--threads", cfg.threads, "worker-pool size (0 = auto; pipeline is sequential)");
    app.add_option("--ball", cfg.ball_path, "function-ball file (default feigdim_d{degree}.ball)");
    app.add_option("--cert", cfg.cert_path,
                   "certificate file (default feigdim_d{degree}.cert.json)");
    app.add_option("--out", cfg.out_path,
                   "output: dimension CSV file (default stdout) / figures file prefix");

    app.add_subcommand("fixpoint", "solve the fixed point and write the function ball")
        ->fallthrough();
    app.add_subcommand("verify", "build and save the monotonicity certificate")->fallthrough();
    app.add_subcommand("dimension", "stream per-generation dimension brackets")->fallthrough();
    app.add_subcommand("figures", "emit rigorous rectangle covers as CSV files")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 64;
    }
    return dispatch(app.get_subcommands().front()->get_name(), cfg);
}
