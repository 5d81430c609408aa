#include <filesystem>

#include <nlohmann/json.hpp>

#include "litho/io.hpp"
#include "litho/optics.hpp"

namespace litho {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string mode_filename(int m) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "v_%03d.field", m);
    return buf;
}

} // namespace

void save_socs_cache(const std::string& dir, const OpticalSystem& sys, const SocsModel& model) {
    fs::create_directories(dir);
    json manifest;
    manifest["format"] = 1;
    manifest["optics"] = {{"lambda_nm", sys.lambda_nm}, {"na", sys.na}, {"sigma_c", sys.sigma_c}};
    manifest["grid"] = {{"n", model.grid.n}, {"dx_nm", model.grid.dx_nm}};
    manifest["n0"] = model.n0;
    manifest["quadrature_weight"] = model.quadrature_weight;
    std::vector<double> eigs;
    for (const auto& m : model.modes) eigs.push_back(m.sigma);
    manifest["eigenvalues"] = eigs;
    atomic_write_text((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    for (int m = 0; m < model.n0; ++m)
        write_field((fs::path(dir) / mode_filename(m)).string(), model.modes[m].v, model.grid.dx_nm,
                    model.grid.dx_nm);
}

std::optional<SocsModel> load_socs_cache(const std::string& dir, const OpticalSystem& sys, const GridSpec& grid,
                                         int n0) {
    fs::path manifest_path = fs::path(dir) / "manifest.json";
    if (!fs::exists(manifest_path)) return std::nullopt;
    json manifest;
    try {
        manifest = json::parse(read_text_file(manifest_path.string()));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    try {
        if (manifest.at("format").get<int>() != 1) return std::nullopt;
        const auto& o = manifest.at("optics");
        if (o.at("lambda_nm").get<double>() != sys.lambda_nm || o.at("na").get<double>() != sys.na ||
            o.at("sigma_c").get<double>() != sys.sigma_c)
            return std::nullopt;
        const auto& g = manifest.at("grid");
        if (g.at("n").get<int>() != grid.n || g.at("dx_nm").get<double>() != grid.dx_nm) return std::nullopt;
        const int stored_n0 = manifest.at("n0").get<int>();
        if (stored_n0 < n0) return std::nullopt;
        auto eigs = manifest.at("eigenvalues").get<std::vector<double>>();
        if ((int)eigs.size() < n0) return std::nullopt;

        SocsModel model;
        model.grid = grid;
        model.n0 = n0;
        model.quadrature_weight = manifest.at("quadrature_weight").get<double>();
        for (int m = 0; m < n0; ++m) {
            fs::path fpath = fs::path(dir) / mode_filename(m);
            if (!fs::exists(fpath)) return std::nullopt;
            FieldFile ff = read_field(fpath.string());
            if (!ff.is_complex || ff.rows != grid.n || ff.cols != grid.n) return std::nullopt;
            SocsMode mode;
            mode.sigma = eigs[m];
            mode.v = std::move(ff.cplx);
            populate_mode_kernels(mode);
            model.modes.push_back(std::move(mode));
        }
        return model;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace litho
