#pragma once

#include <memory>

#include "litho/config.hpp"

namespace litho {

struct GradcheckEntry {
    std::string name;
    double rel_err = 0.0;
    double tolerance = 0.0;
};

struct GradcheckReport {
    std::vector<GradcheckEntry> entries;
    bool pass = false;
    std::string to_json_text() const;
};

// Every analytic gradient against the central-difference oracle on a random
// interior phase field (values in (0.1, 0.9)), dense SOCS at the given grid
// size. Deterministic for a fixed seed.
GradcheckReport run_gradcheck(int grid_n, std::uint64_t seed);

// One experiment: configuration plus prepared immutable state (target, SOCS
// model, forward engine, resolved threshold). The coarse operations mirror
// the CLI subcommands and write their artifacts under a directory.
class Experiment {
public:
    explicit Experiment(ExperimentConfig cfg);
    ~Experiment();

    const ExperimentConfig& config() const { return cfg_; }
    ExperimentConfig& config() { return cfg_; }

    void prepare(); // target + SOCS (cache-aware) + threshold; idempotent

    const TargetPattern& target() const;
    const SocsModel& socs() const;
    const ForwardEngine& engine() const;
    double threshold() const;
    FunctionalConfig functional() const; // template with the resolved threshold

    // full optimization run; writes trace.csv, stage checkpoints, final
    // fields/rasters and report.json under out_dir; returns the report JSON
    std::string optimize(const std::string& out_dir);

    // exposure + metrics for a stored mask (.field/.pgm/.pbm)
    std::string analyze(const std::string& mask_path, const std::string& out_dir);

    // threshold sweep table for a stored mask
    std::string sweep(const std::string& mask_path, const std::string& out_csv);

    // force-build the SOCS model and store it under cache_dir
    std::string build_socs(const std::string& cache_dir);

    void write_target(const std::string& path) const;

private:
    RealField load_mask(const std::string& path) const;
    // SOCS cache location: LITHO_SOCS_CACHE overrides the config value
    std::string cache_dir() const;

    ExperimentConfig cfg_;
    bool prepared_ = false;
    std::unique_ptr<TargetPattern> target_;
    std::unique_ptr<SocsModel> socs_;
    std::unique_ptr<ForwardEngine> engine_;
    double threshold_ = 0.0;
};

} // namespace litho
