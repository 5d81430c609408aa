// Command-line front end; links only the public C API.
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "litho.h"

namespace {

struct ContextDeleter {
    void operator()(litho_context* ctx) const { litho_context_destroy(ctx); }
};
using ContextPtr = std::unique_ptr<litho_context, ContextDeleter>;

int finish(litho_status st, litho_context* ctx, bool print_report = true) {
    if (st != LITHO_OK) {
        std::fprintf(stderr, "error: %s\n", litho_context_last_error(ctx));
        const char* report = litho_context_report_json(ctx);
        if (print_report && report && *report) std::fputs(report, stdout);
        // CLI contract: 2 = validation error, 3 = numerical failure
        return st == LITHO_ERROR_NUMERICAL || st == LITHO_ERROR_INTERNAL ? 3 : 2;
    }
    const char* report = litho_context_report_json(ctx);
    if (print_report && report && *report) std::fputs(report, stdout);
    return 0;
}

ContextPtr make_context(const std::string& config_path, litho_status& st) {
    litho_context* raw = nullptr;
    st = litho_context_create_from_file(config_path.c_str(), &raw);
    return ContextPtr(raw);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-field mask synthesis for partially coherent photolithography"};
    app.require_subcommand(1);

    std::string config_path, out_path, mask_path, cache_dir;
    std::vector<double> hvar_override;
    unsigned long long seed = 0;
    bool seed_set = false;
    int gradcheck_n = 16;
    unsigned long long gradcheck_seed = 1;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--seed", seed, "override run.seed")->each([&](const std::string&) { seed_set = true; });
    };

    CLI::App* tcc = app.add_subcommand("tcc", "build the SOCS decomposition and store it");
    add_config(tcc);
    tcc->add_option("--cache", cache_dir, "cache directory (defaults to socs.cache_dir)");

    CLI::App* optimize = app.add_subcommand("optimize", "run the full mask optimization");
    add_config(optimize);
    optimize->add_option("--out", out_path, "output directory (defaults to run.out_dir)");

    CLI::App* gradcheck = app.add_subcommand("gradcheck", "verify analytic gradients against finite differences");
    gradcheck->add_option("--n", gradcheck_n, "grid size")->check(CLI::Range(8, 48));
    gradcheck->add_option("--seed", gradcheck_seed, "random phase-field seed");

    CLI::App* analyze = app.add_subcommand("analyze", "expose a stored mask and report metrics");
    add_config(analyze);
    analyze->add_option("--mask", mask_path, "mask file (.field/.pgm/.pbm)")->required();
    analyze->add_option("--out", out_path, "output directory (defaults to run.out_dir)");

    CLI::App* sweep = app.add_subcommand("sweep", "threshold sweep table for a stored mask");
    add_config(sweep);
    sweep->add_option("--mask", mask_path, "mask file (.field/.pgm/.pbm)")->required();
    sweep->add_option("--out", out_path, "output CSV path");
    sweep->add_option("--hvar", hvar_override, "threshold shifts in percent (overrides run.hvar_list)");

    CLI::App* gen_target = app.add_subcommand("gen-target", "emit the configured target raster");
    add_config(gen_target);
    gen_target->add_option("--out", out_path, "output PBM path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (gradcheck->parsed()) {
        litho_context* raw = nullptr;
        litho_context_create("{}", &raw);
        ContextPtr ctx(raw);
        litho_status st = litho_gradcheck(ctx.get(), gradcheck_n, gradcheck_seed);
        return finish(st, ctx.get());
    }

    litho_status st = LITHO_OK;
    ContextPtr ctx = make_context(config_path, st);
    if (st != LITHO_OK) return finish(st, ctx.get());
    if (seed_set) {
        st = litho_context_set_seed(ctx.get(), seed);
        if (st != LITHO_OK) return finish(st, ctx.get());
    }
    if (!hvar_override.empty()) {
        st = litho_context_set_hvar_list(ctx.get(), hvar_override.data(), hvar_override.size());
        if (st != LITHO_OK) return finish(st, ctx.get());
    }

    if (tcc->parsed()) {
        st = litho_build_socs(ctx.get(), cache_dir.c_str());
    } else if (optimize->parsed()) {
        st = litho_optimize(ctx.get(), out_path.c_str());
    } else if (analyze->parsed()) {
        st = litho_analyze(ctx.get(), mask_path.c_str(), out_path.c_str());
    } else if (sweep->parsed()) {
        std::string csv = out_path.empty() ? "sweep.csv" : out_path;
        st = litho_sweep(ctx.get(), mask_path.c_str(), csv.c_str());
    } else if (gen_target->parsed()) {
        std::string path = out_path.empty() ? "target.pbm" : out_path;
        st = litho_write_target(ctx.get(), path.c_str());
    }
    return finish(st, ctx.get());
}
