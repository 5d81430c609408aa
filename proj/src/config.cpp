#include "litho/config.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace litho {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& what) { fail(ErrorCode::invalid_config, "config: " + what); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) config_fail(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) config_fail("unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) config_fail(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) config_fail(where + "." + key + " must be an integer");
    return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) config_fail(where + "." + key + " must be a boolean");
    return obj[key].get<bool>();
}

std::string get_str(const json& obj, const std::string& where, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) config_fail(where + "." + key + " must be a string");
    return obj[key].get<std::string>();
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::parse_error, std::string("config: ") + e.what());
    }
    check_keys(root, "config", {"optics", "grid", "socs", "functional", "schedule", "run"});

    ExperimentConfig cfg;

    if (root.contains("optics")) {
        const json& o = root["optics"];
        check_keys(o, "optics", {"lambda_nm", "na", "sigma_c"});
        cfg.optics = OpticalSystem(get_num(o, "optics", "lambda_nm", 193.0), get_num(o, "optics", "na", 1.0),
                                   get_num(o, "optics", "sigma_c", 0.067));
    }
    if (root.contains("grid")) {
        const json& g = root["grid"];
        check_keys(g, "grid", {"n", "dx_nm"});
        cfg.grid = GridSpec(get_int(g, "grid", "n", 128), get_num(g, "grid", "dx_nm", 12.5));
    }
    if (root.contains("socs")) {
        const json& s = root["socs"];
        check_keys(s, "socs", {"n0", "cache_dir"});
        cfg.socs_n0 = get_int(s, "socs", "n0", 10);
        cfg.socs_cache_dir = get_str(s, "socs", "cache_dir", "");
    }
    if (root.contains("functional")) {
        const json& f = root["functional"];
        check_keys(f, "functional",
                   {"a", "b", "c", "misfit_exponent", "mm_exponent", "double_well", "drop_cp", "threshold_rule",
                    "reg_profile", "smooth_abs_mu_rel"});
        cfg.weight_perim_diff = get_num(f, "functional", "a", cfg.weight_perim_diff);
        cfg.weight_mm = get_num(f, "functional", "b", cfg.weight_mm);
        cfg.weight_reg = get_num(f, "functional", "c", cfg.weight_reg);
        cfg.misfit_exponent = get_int(f, "functional", "misfit_exponent", cfg.misfit_exponent);
        cfg.mm_exponent = get_num(f, "functional", "mm_exponent", cfg.mm_exponent);
        cfg.drop_cp = get_bool(f, "functional", "drop_cp", cfg.drop_cp);
        cfg.smooth_abs_mu_rel = get_num(f, "functional", "smooth_abs_mu_rel", cfg.smooth_abs_mu_rel);
        if (f.contains("double_well") && get_str(f, "functional", "double_well", "s(1-s)") != "s(1-s)")
            config_fail("functional.double_well: only \"s(1-s)\" is supported");
        if (f.contains("threshold_rule")) {
            const json& t = f["threshold_rule"];
            check_keys(t, "threshold_rule", {"type", "fraction", "value"});
            std::string type = get_str(t, "threshold_rule", "type", "fraction_of_peak");
            if (type == "fraction_of_peak") {
                cfg.threshold_rule.kind = ThresholdRule::Kind::fraction_of_peak;
                cfg.threshold_rule.fraction = get_num(t, "threshold_rule", "fraction", 0.4);
            } else if (type == "fixed") {
                cfg.threshold_rule.kind = ThresholdRule::Kind::fixed;
                cfg.threshold_rule.value = get_num(t, "threshold_rule", "value", 1.0);
            } else {
                config_fail("threshold_rule.type must be 'fraction_of_peak' or 'fixed'");
            }
        }
        if (f.contains("reg_profile")) {
            const json& r = f["reg_profile"];
            check_keys(r, "reg_profile", {"d_hard", "d_soft", "alpha"});
            cfg.reg_d_hard = get_num(r, "reg_profile", "d_hard", cfg.reg_d_hard);
            cfg.reg_d_soft = get_num(r, "reg_profile", "d_soft", cfg.reg_d_soft);
            cfg.reg_alpha = get_num(r, "reg_profile", "alpha", cfg.reg_alpha);
        }
    }
    if (root.contains("schedule")) {
        const json& s = root["schedule"];
        check_keys(s, "schedule",
                   {"eps0", "eta0", "gamma0", "rate_eps", "rate_eta", "rate_gamma", "iters_per_stage",
                    "total_iters"});
        cfg.schedule.eps0 = get_num(s, "schedule", "eps0", cfg.schedule.eps0);
        cfg.schedule.eta0 = get_num(s, "schedule", "eta0", cfg.schedule.eta0);
        cfg.schedule.gamma0 = get_num(s, "schedule", "gamma0", cfg.schedule.gamma0);
        cfg.schedule.rate_eps = get_num(s, "schedule", "rate_eps", cfg.schedule.rate_eps);
        cfg.schedule.rate_eta = get_num(s, "schedule", "rate_eta", cfg.schedule.rate_eta);
        cfg.schedule.rate_gamma = get_num(s, "schedule", "rate_gamma", cfg.schedule.rate_gamma);
        cfg.schedule.iters_per_stage = get_int(s, "schedule", "iters_per_stage", cfg.schedule.iters_per_stage);
        cfg.schedule.total_iters = get_int(s, "schedule", "total_iters", cfg.schedule.total_iters);
    }
    if (root.contains("run")) {
        const json& r = root["run"];
        check_keys(r, "run", {"target", "initial_guess", "support", "hvar_list", "seed", "out_dir"});
        if (r.contains("target")) {
            const json& t = r["target"];
            check_keys(t, "run.target", {"kind", "rects"});
            std::string kind = get_str(t, "run.target", "kind", "target1_like");
            if (kind == "target1_like")
                cfg.target.kind = TargetKind::target1_like;
            else if (kind == "target2_like")
                cfg.target.kind = TargetKind::target2_like;
            else if (kind == "custom_rects")
                cfg.target.kind = TargetKind::custom_rects;
            else
                config_fail("run.target.kind must be target1_like, target2_like or custom_rects");
            if (t.contains("rects")) {
                if (!t["rects"].is_array()) config_fail("run.target.rects must be an array");
                for (const auto& e : t["rects"]) {
                    if (!e.is_array() || e.size() != 4) config_fail("run.target.rects entries must be [r0,c0,rows,cols]");
                    cfg.target.rects.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()});
                }
            }
        }
        if (r.contains("initial_guess")) {
            const json& g = r["initial_guess"];
            check_keys(g, "run.initial_guess", {"kind", "blur_px", "level"});
            std::string kind = get_str(g, "run.initial_guess", "kind", "diffuse");
            if (kind == "perturbed_target")
                cfg.initial_guess.kind = InitialGuessKind::perturbed_target;
            else if (kind == "diffuse")
                cfg.initial_guess.kind = InitialGuessKind::diffuse;
            else
                config_fail("run.initial_guess.kind must be perturbed_target or diffuse");
            cfg.initial_guess.params.blur_px = get_num(g, "run.initial_guess", "blur_px", 2.0);
            cfg.initial_guess.params.level = get_num(g, "run.initial_guess", "level", 0.5);
        }
        if (r.contains("support")) {
            const json& s = r["support"];
            check_keys(s, "run.support", {"enabled", "dilate_px"});
            cfg.support.enabled = get_bool(s, "run.support", "enabled", false);
            cfg.support.dilate_px = get_int(s, "run.support", "dilate_px", 8);
        }
        if (r.contains("hvar_list")) {
            if (!r["hvar_list"].is_array()) config_fail("run.hvar_list must be an array");
            cfg.hvar_list.clear();
            for (const auto& e : r["hvar_list"]) cfg.hvar_list.push_back(e.get<double>());
        }
        if (r.contains("seed")) cfg.seed = r["seed"].get<std::uint64_t>();
        cfg.out_dir = get_str(r, "run", "out_dir", cfg.out_dir);
    }

    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    json root;
    root["optics"] = {{"lambda_nm", optics.lambda_nm}, {"na", optics.na}, {"sigma_c", optics.sigma_c}};
    root["grid"] = {{"n", grid.n}, {"dx_nm", grid.dx_nm}};
    root["socs"] = {{"n0", socs_n0}, {"cache_dir", socs_cache_dir}};
    json th;
    if (threshold_rule.kind == ThresholdRule::Kind::fraction_of_peak)
        th = {{"type", "fraction_of_peak"}, {"fraction", threshold_rule.fraction}};
    else
        th = {{"type", "fixed"}, {"value", threshold_rule.value}};
    root["functional"] = {{"a", weight_perim_diff},
                          {"b", weight_mm},
                          {"c", weight_reg},
                          {"misfit_exponent", misfit_exponent},
                          {"mm_exponent", mm_exponent},
                          {"double_well", "s(1-s)"},
                          {"drop_cp", drop_cp},
                          {"threshold_rule", th},
                          {"reg_profile", {{"d_hard", reg_d_hard}, {"d_soft", reg_d_soft}, {"alpha", reg_alpha}}},
                          {"smooth_abs_mu_rel", smooth_abs_mu_rel}};
    root["schedule"] = {{"eps0", schedule.eps0},
                        {"eta0", schedule.eta0},
                        {"gamma0", schedule.gamma0},
                        {"rate_eps", schedule.rate_eps},
                        {"rate_eta", schedule.rate_eta},
                        {"rate_gamma", schedule.rate_gamma},
                        {"iters_per_stage", schedule.iters_per_stage},
                        {"total_iters", schedule.total_iters}};
    json tgt;
    tgt["kind"] = target.kind == TargetKind::target1_like    ? "target1_like"
                  : target.kind == TargetKind::target2_like ? "target2_like"
                                                            : "custom_rects";
    if (!target.rects.empty()) {
        json arr = json::array();
        for (const auto& r : target.rects) arr.push_back({r.r0, r.c0, r.rows, r.cols});
        tgt["rects"] = arr;
    }
    root["run"] = {{"target", tgt},
                   {"initial_guess",
                    {{"kind", initial_guess.kind == InitialGuessKind::diffuse ? "diffuse" : "perturbed_target"},
                     {"blur_px", initial_guess.params.blur_px},
                     {"level", initial_guess.params.level}}},
                   {"support", {{"enabled", support.enabled}, {"dilate_px", support.dilate_px}}},
                   {"hvar_list", hvar_list},
                   {"seed", seed},
                   {"out_dir", out_dir}};
    return root.dump(2) + "\n";
}

void ExperimentConfig::validate() const {
    if (socs_n0 < 1) config_fail("socs.n0 must be >= 1");
    if (socs_n0 > grid.n * grid.n) config_fail("socs.n0 exceeds the operator rank bound");
    if (threshold_rule.kind == ThresholdRule::Kind::fraction_of_peak && !(threshold_rule.fraction > 0.0))
        config_fail("threshold_rule.fraction must be > 0");
    if (threshold_rule.kind == ThresholdRule::Kind::fixed && !(threshold_rule.value > 0.0))
        config_fail("threshold_rule.value must be > 0");
    schedule.validate();
    FunctionalConfig f = functional_template();
    f.threshold = 1.0;
    f.validate();
    if (support.enabled && support.dilate_px < 0) config_fail("run.support.dilate_px must be >= 0");
    if (target.kind == TargetKind::custom_rects && target.rects.empty())
        config_fail("run.target.kind custom_rects needs run.target.rects");
}

FunctionalConfig ExperimentConfig::functional_template() const {
    FunctionalConfig f;
    f.weight_perim_diff = weight_perim_diff;
    f.weight_mm = weight_mm;
    f.weight_reg = weight_reg;
    f.misfit_exponent = misfit_exponent;
    f.mm_exponent = mm_exponent;
    f.drop_cp = drop_cp;
    f.reg = RegProfile::from_band(reg_d_hard, reg_d_soft, reg_alpha);
    f.smooth_abs_mu_rel = smooth_abs_mu_rel;
    f.eps = schedule.eps0;
    f.eta = schedule.eta0;
    f.gamma = schedule.gamma0;
    return f;
}

} // namespace litho
