#pragma once

#include "riemcurv/geometry.hpp"
#include "riemcurv/metric_chart.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace riemcurv {

// A ready-made chart with its Killing basis and documented constants.
struct Preset {
    std::string name;
    MetricChart chart;
    std::vector<VectorFieldFn> killing;
    std::vector<std::string> killing_labels;
    VectorFieldFn probe; // canonical non-Killing probe field
    std::string probe_label;
    std::map<std::string, double> params;

    // Documented constants.
    std::optional<double> constant_curvature;
    std::function<double(const Vec&)> gaussian_curvature; // 2-dim charts only
    int expected_rank_d1 = -1; // documented rank of the first prolonged
                               // distribution at generic immersive jets
    int dim_isometry() const { return static_cast<int>(killing.size()); }
};

// name in {euclidean, sphere, hyperbolic, torus_example1, g_kappa_tau,
// solvable_group, bump_example2, perturbed_surface}; unknown parameters and
// out-of-range values raise ConfigError.
Preset load_preset(const std::string& name, const std::map<std::string, double>& params);

struct PresetSchema {
    std::string name;
    std::string parameters; // short human description
    std::string notes;
};
std::vector<PresetSchema> preset_schemas();

struct SelfCheckItem {
    std::string name;
    bool pass;
    double value;
    double threshold;
};
struct SelfCheckReport {
    std::string preset;
    std::vector<SelfCheckItem> items;
    bool all_pass() const;
};

// Killing residuals, probe residual, constant-curvature identity where
// applicable, documented rank checks, and per-preset signature checks.
SelfCheckReport preset_selfcheck(const std::string& name,
                                 const std::map<std::string, double>& params);

} // namespace riemcurv
