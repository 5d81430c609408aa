#include "litho.h"

#include <optional>
#include <string>

#include "litho/experiment.hpp"
#include "litho/io.hpp"

struct litho_context {
    std::optional<litho::Experiment> experiment;
    std::string last_error;
    std::string report;
};

namespace {

litho_status map_code(litho::ErrorCode code) {
    using litho::ErrorCode;
    switch (code) {
    case ErrorCode::convergence_failure:
    case ErrorCode::non_finite_objective:
        return LITHO_ERROR_NUMERICAL;
    case ErrorCode::io_error:
        return LITHO_ERROR_IO;
    default:
        return LITHO_ERROR_VALIDATION;
    }
}

template <typename F>
litho_status guarded(litho_context* ctx, F&& body) {
    if (!ctx) return LITHO_ERROR_VALIDATION;
    ctx->last_error.clear();
    try {
        body();
        return LITHO_OK;
    } catch (const litho::Error& e) {
        ctx->last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return LITHO_ERROR_INTERNAL;
    }
}

litho::Experiment& require_experiment(litho_context* ctx) {
    if (!ctx->experiment) litho::fail(litho::ErrorCode::invalid_config, "context has no valid configuration");
    return *ctx->experiment;
}

} // namespace

extern "C" {

const char* litho_version(void) { return "1.0.0"; }

litho_status litho_context_create(const char* config_json, litho_context** out_ctx) {
    if (!out_ctx) return LITHO_ERROR_VALIDATION;
    auto* ctx = new litho_context();
    *out_ctx = ctx;
    return guarded(ctx, [&] {
        if (!config_json) litho::fail(litho::ErrorCode::invalid_config, "config text is null");
        ctx->experiment.emplace(litho::ExperimentConfig::from_json_text(config_json));
    });
}

litho_status litho_context_create_from_file(const char* config_path, litho_context** out_ctx) {
    if (!out_ctx) return LITHO_ERROR_VALIDATION;
    auto* ctx = new litho_context();
    *out_ctx = ctx;
    return guarded(ctx, [&] {
        if (!config_path) litho::fail(litho::ErrorCode::invalid_config, "config path is null");
        ctx->experiment.emplace(litho::ExperimentConfig::from_json_text(litho::read_text_file(config_path)));
    });
}

void litho_context_destroy(litho_context* ctx) { delete ctx; }

const char* litho_context_last_error(const litho_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

const char* litho_context_report_json(const litho_context* ctx) { return ctx ? ctx->report.c_str() : ""; }

litho_status litho_context_set_seed(litho_context* ctx, unsigned long long seed) {
    return guarded(ctx, [&] { require_experiment(ctx).config().seed = seed; });
}

litho_status litho_context_set_hvar_list(litho_context* ctx, const double* values, size_t count) {
    return guarded(ctx, [&] {
        if (!values && count > 0) litho::fail(litho::ErrorCode::invalid_config, "hvar list is null");
        auto& cfg = require_experiment(ctx).config();
        cfg.hvar_list.assign(values, values + count);
    });
}

litho_status litho_prepare(litho_context* ctx) {
    return guarded(ctx, [&] { require_experiment(ctx).prepare(); });
}

litho_status litho_build_socs(litho_context* ctx, const char* cache_dir) {
    return guarded(ctx, [&] {
        ctx->report = require_experiment(ctx).build_socs(cache_dir ? cache_dir : "");
    });
}

litho_status litho_write_target(litho_context* ctx, const char* out_path) {
    return guarded(ctx, [&] {
        if (!out_path) litho::fail(litho::ErrorCode::invalid_config, "output path is null");
        require_experiment(ctx).write_target(out_path);
    });
}

litho_status litho_optimize(litho_context* ctx, const char* out_dir) {
    return guarded(ctx, [&] {
        auto& exp = require_experiment(ctx);
        std::string dir = out_dir && *out_dir ? out_dir : exp.config().out_dir;
        ctx->report = exp.optimize(dir);
    });
}

litho_status litho_analyze(litho_context* ctx, const char* mask_path, const char* out_dir) {
    return guarded(ctx, [&] {
        if (!mask_path) litho::fail(litho::ErrorCode::invalid_config, "mask path is null");
        auto& exp = require_experiment(ctx);
        std::string dir = out_dir && *out_dir ? out_dir : exp.config().out_dir;
        ctx->report = exp.analyze(mask_path, dir);
    });
}

litho_status litho_sweep(litho_context* ctx, const char* mask_path, const char* out_csv) {
    return guarded(ctx, [&] {
        if (!mask_path || !out_csv) litho::fail(litho::ErrorCode::invalid_config, "mask path or csv path is null");
        ctx->report = require_experiment(ctx).sweep(mask_path, out_csv);
    });
}

litho_status litho_gradcheck(litho_context* ctx, int grid_n, unsigned long long seed) {
    litho_status st = guarded(ctx, [&] {
        litho::GradcheckReport report = litho::run_gradcheck(grid_n, seed);
        ctx->report = report.to_json_text();
        if (!report.pass)
            litho::fail(litho::ErrorCode::convergence_failure,
                        "gradient checks exceeded tolerance (see report)");
    });
    return st;
}

} // extern "C"
