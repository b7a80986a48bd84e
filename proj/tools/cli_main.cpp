#include "riemcurv/congruence.hpp"
#include "riemcurv/errors.hpp"
#include "riemcurv/invariants.hpp"
#include "riemcurv/json_writer.hpp"
#include "riemcurv/presets.hpp"
#include "riemcurv/reconstruction.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace riemcurv;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotCongruent = 2;
constexpr int kExitInconclusive = 3;

// "name" or "name:spec" with spec a comma list of values or key=value pairs.
struct SpecString {
    std::string name;
    std::vector<std::string> positional;
    std::map<std::string, double> params;
};

SpecString parse_spec(const std::string& text) {
    SpecString out;
    const auto colon = text.find(':');
    out.name = text.substr(0, colon);
    if (colon == std::string::npos) return out;
    std::string rest = text.substr(colon + 1);
    size_t start = 0;
    while (start <= rest.size()) {
        size_t end = rest.find(',', start);
        if (end == std::string::npos) end = rest.size();
        const std::string tok = rest.substr(start, end - start);
        if (!tok.empty()) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) {
                out.positional.push_back(tok);
            } else {
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "k" && val == "matched") {
                    out.params["kappa"] = 0.5; // curvature of the Example-1 pair
                } else {
                    out.params[key] = std::stod(val);
                }
            }
        }
        start = end + 1;
    }
    return out;
}

void apply_positional(SpecString& spec, const std::vector<std::string>& names) {
    for (size_t i = 0; i < spec.positional.size(); ++i) {
        if (i >= names.size())
            throw ConfigError("too many positional parameters for '" + spec.name + "'");
        spec.params[names[i]] = std::stod(spec.positional[i]);
    }
    spec.positional.clear();
}

Preset metric_from_spec(const std::string& text) {
    SpecString spec = parse_spec(text);
    if (spec.name.size() > 4 && spec.name.substr(spec.name.size() - 4) == ".csv") {
        Preset p;
        p.name = "grid";
        p.chart = load_grid_metric_csv(spec.name);
        return p;
    }
    if (spec.name == "euclidean" || spec.name == "bump_example2")
        apply_positional(spec, {"m"});
    else if (spec.name == "sphere" || spec.name == "hyperbolic")
        apply_positional(spec, {"k", "m"});
    else if (spec.name == "g_kappa_tau")
        apply_positional(spec, {"kappa", "tau"});
    else if (spec.name == "solvable_group")
        apply_positional(spec, {"nu"});
    else if (spec.name == "perturbed_surface")
        apply_positional(spec, {"eps", "seed"});
    else if (!spec.positional.empty())
        throw ConfigError("preset '" + spec.name + "' takes no positional parameters");
    return load_preset(spec.name, spec.params);
}

Preset metric_from_json(const json& j) {
    if (j.is_string()) return metric_from_spec(j.get<std::string>());
    if (j.contains("grid_csv")) {
        Preset p;
        p.name = "grid";
        p.chart = load_grid_metric_csv(j["grid_csv"].get<std::string>());
        return p;
    }
    std::map<std::string, double> params;
    if (j.contains("params"))
        for (const auto& [key, value] : j["params"].items())
            params[key] = value.get<double>();
    return load_preset(j.at("preset").get<std::string>(), params);
}

struct CurveWithMetric {
    CurveProvider curve;
    std::optional<Preset> inferred_metric;
};

CurveWithMetric curve_from_spec(const std::string& text) {
    SpecString spec = parse_spec(text);
    if (spec.name.size() > 4 && spec.name.substr(spec.name.size() - 4) == ".csv")
        return {load_curve_csv(spec.name), std::nullopt};

    if (spec.name == "circle" || spec.name == "plane_circle")
        apply_positional(spec, spec.name == "circle"
                                   ? std::vector<std::string>{"r", "speed"}
                                   : std::vector<std::string>{"kappa"});
    else if (spec.name == "helix")
        apply_positional(spec, {"a", "b"});
    else if (spec.name == "great_circle")
        apply_positional(spec, {"k", "dim"});
    else
        apply_positional(spec, {});

    CurveWithMetric out{make_curve_preset(spec.name, spec.params), std::nullopt};
    if (spec.name == "circle" || spec.name == "plane_circle" || spec.name == "line")
        out.inferred_metric =
            load_preset("euclidean", {{"m", static_cast<double>(out.curve.dim())}});
    else if (spec.name == "helix")
        out.inferred_metric = load_preset("euclidean", {{"m", 3}});
    else if (spec.name == "great_circle") {
        const double k = spec.params.count("k") ? spec.params.at("k") : 1.0;
        out.inferred_metric = load_preset(
            "sphere", {{"k", k}, {"m", static_cast<double>(out.curve.dim())}});
    } else if (spec.name == "torus_top_circle")
        out.inferred_metric = load_preset("torus_example1", {});
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << text;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// JSON config + explicit flag with different values is an error rather than
// a silent override.
class ConfigMerge {
public:
    ConfigMerge(CLI::App* app, json cfg) : app_(app), cfg_(std::move(cfg)) {}

    template <typename T>
    void resolve(const std::string& flag, const std::string& key, T& value) const {
        const CLI::Option* opt = app_->get_option_no_throw("--" + flag);
        const bool in_cfg = cfg_.contains(key);
        const bool in_flags = opt != nullptr && opt->count() > 0;
        if (in_cfg && in_flags) {
            const T cfg_value = cfg_[key].get<T>();
            if (cfg_value != value)
                throw ConfigError("option '" + key + "' given both in the config file "
                                  "and as a flag with different values");
        } else if (in_cfg) {
            value = cfg_[key].get<T>();
        }
    }
    const json& raw() const { return cfg_; }

private:
    CLI::App* app_;
    json cfg_;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::congruent: return "congruent";
        case Verdict::not_congruent: return "not_congruent";
        default: return "inconclusive";
    }
}

std::string criterion_name(CongruenceCriterion c) {
    switch (c) {
        case CongruenceCriterion::general: return "general";
        case CongruenceCriterion::symmetric: return "symmetric";
        default: return "constant_curvature";
    }
}

CongruenceCriterion parse_criterion(const std::string& name) {
    if (name == "general") return CongruenceCriterion::general;
    if (name == "symmetric") return CongruenceCriterion::symmetric;
    if (name == "constant_curvature") return CongruenceCriterion::constant_curvature;
    throw ConfigError("unknown criterion: " + name);
}

int run_curvatures(const std::string& metric_spec, const std::string& curve_spec,
                   double t0, double window, int samples, const std::string& out_path) {
    CurveWithMetric cw = curve_from_spec(curve_spec);
    Preset preset = metric_spec.empty()
                        ? (cw.inferred_metric ? *cw.inferred_metric
                                              : throw ConfigError(
                                                    "curve needs an explicit --preset"))
                        : metric_from_spec(metric_spec);
    const int m = preset.chart.dim();
    if (cw.curve.dim() != m)
        throw ConfigError("curve dimension does not match the metric dimension");

    std::string csv = "t";
    for (int i = 0; i < m; ++i) csv += ",kappa" + std::to_string(i);
    for (int k = 1; k <= m; ++k) csv += ",delta" + std::to_string(k);
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i <= m; ++i) csv += ",X" + std::to_string(j) + "_" + std::to_string(i);
    csv += "\n";
    for (int s = 0; s < samples; ++s) {
        const double t =
            samples == 1 ? t0 : t0 - window + 2.0 * window * s / (samples - 1);
        const FrenetResult fr = frenet_result(preset.chart, cw.curve.jet(t, m));
        csv += format_double(t);
        for (int i = 0; i < m; ++i) csv += "," + format_double(fr.kappas[i]);
        for (int k = 0; k < m; ++k) csv += "," + format_double(fr.deltas[k]);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) csv += "," + format_double(fr.frame(i, j));
        csv += "\n";
    }
    write_text(out_path, csv);
    return kExitOk;
}

KappaFunction kappa_from_json(const json& j) {
    if (j.is_number()) return KappaFunction::constant(j.get<double>());
    if (j.contains("const")) return KappaFunction::constant(j["const"].get<double>());
    if (j.contains("poly")) {
        std::vector<double> coeffs;
        for (const auto& c : j["poly"]) coeffs.push_back(c.get<double>());
        return KappaFunction::polynomial(coeffs);
    }
    throw ConfigError("kappa spec must be a number, {\"const\": v} or {\"poly\": [..]}");
}

int run_reconstruct(const json& cfg, const std::string& out_path, int csv_thin) {
    if (!cfg.contains("metric")) throw ConfigError("reconstruct config needs 'metric'");
    const Preset preset = metric_from_json(cfg["metric"]);
    const int m = preset.chart.dim();

    CurvatureSpec spec;
    spec.m = m;
    spec.t0 = cfg.value("t0", 0.0);
    if (!cfg.contains("kappas") || static_cast<int>(cfg["kappas"].size()) != m)
        throw ConfigError("reconstruct config needs m kappa entries");
    for (const auto& k : cfg["kappas"]) spec.kappas.push_back(kappa_from_json(k));

    Vec x0(m);
    if (!cfg.contains("x0") || static_cast<int>(cfg["x0"].size()) != m)
        throw ConfigError("reconstruct config needs x0 of length m");
    for (int i = 0; i < m; ++i) x0[i] = cfg["x0"][i].get<double>();

    Mat frame0(m, m);
    if (cfg.contains("frame0")) {
        const auto& f = cfg["frame0"];
        if (static_cast<int>(f.size()) != m)
            throw ConfigError("frame0 must list m column vectors");
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) frame0(i, j) = f[j][i].get<double>();
    } else if (cfg.contains("vectors")) {
        const auto& w = cfg["vectors"];
        if (static_cast<int>(w.size()) != m)
            throw ConfigError("vectors must list m chain vectors w_1..w_m");
        Mat wm(m, m);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) wm(i, j) = w[j][i].get<double>();
        frame0 = initial_data_from_vectors(preset.chart, x0, wm, spec);
    } else {
        throw ConfigError("reconstruct config needs 'frame0' or 'vectors'");
    }

    ReconstructOptions opts;
    opts.step = cfg.value("step", 1e-3);
    opts.reorthonormalize = cfg.value("reorthonormalize", false);
    const double span = cfg.value("span", 0.5);
    const ReconstructionResult res =
        reconstruct(preset.chart, x0, frame0, spec, span, opts);

    // trajectory CSV with re-measured curvatures at thinned samples
    const CurveProvider sampled = res.sampled_curve(csv_thin);
    std::string csv = "t";
    for (int i = 0; i < m; ++i) csv += ",x" + std::to_string(i + 1);
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i <= m; ++i) csv += ",X" + std::to_string(j) + "_" + std::to_string(i);
    for (int i = 0; i < m; ++i) csv += ",kappa" + std::to_string(i);
    csv += "\n";

    Vec kappa_err = Vec::Zero(m);
    const double t_lo = res.t.front() + 0.06, t_hi = res.t.back() - 0.06;
    for (size_t q = 0; q < res.t.size(); q += static_cast<size_t>(csv_thin)) {
        const double t = res.t[q];
        csv += format_double(t);
        for (int i = 0; i < m; ++i) csv += "," + format_double(res.x[q][i]);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) csv += "," + format_double(res.frames[q](i, j));
        if (t >= t_lo && t <= t_hi) {
            const Vec k = measure_kappas(preset.chart, sampled, t);
            for (int i = 0; i < m; ++i) {
                csv += "," + format_double(k[i]);
                kappa_err[i] =
                    std::max(kappa_err[i], std::abs(k[i] - spec.kappas[i].value(t)));
            }
        } else {
            for (int i = 0; i < m; ++i) csv += ",";
        }
        csv += "\n";
    }
    write_text(out_path, csv);

    JsonWriter report;
    report.begin_object();
    report.key("max_orthonormality_drift").value(res.max_orthonormality_drift);
    report.key("exited_domain").value(res.exited_domain);
    report.key("kappa_roundtrip_sup_error").number_array(kappa_err);
    report.key("samples").value(static_cast<long long>(res.t.size()));
    report.end_object();
    std::cout << report.str() << "\n";
    return kExitOk;
}

int run_congruence(const std::string& a_spec, const std::string& b_spec,
                   const std::string& metric_a_spec, const std::string& metric_b_spec,
                   const std::string& criterion, double t0, int j_max, double window,
                   int samples, bool polar, const std::string& out_path) {
    CurveWithMetric a = curve_from_spec(a_spec);
    CurveWithMetric b = curve_from_spec(b_spec);
    const Preset pa = metric_a_spec.empty()
                          ? (a.inferred_metric ? *a.inferred_metric
                                               : throw ConfigError(
                                                     "curve A needs --metric-a"))
                          : metric_from_spec(metric_a_spec);
    const Preset pb = metric_b_spec.empty()
                          ? (b.inferred_metric ? *b.inferred_metric
                                               : throw ConfigError(
                                                     "curve B needs --metric-b"))
                          : metric_from_spec(metric_b_spec);
    if (a.curve.dim() != pa.chart.dim() || b.curve.dim() != pb.chart.dim())
        throw ConfigError("curve dimension does not match the metric dimension");

    CongruenceOptions opts;
    opts.criterion = parse_criterion(criterion);
    opts.j_max = j_max;
    opts.window = window;
    opts.samples = samples;
    opts.with_polar_check = polar;
    const CongruenceReport rep =
        congruence_test(pa.chart, a.curve, pb.chart, b.curve, t0, opts);

    JsonWriter w;
    w.begin_object();
    w.key("verdict").value(verdict_name(rep.verdict));
    w.key("criterion").value(criterion_name(rep.criterion));
    w.key("j_max").value(rep.j_max);
    w.key("window").value(rep.window);
    w.key("analytic_inputs").value(rep.analytic_inputs);
    w.key("tolerances").begin_object();
    w.key("kappa").value(rep.tol.kappa);
    w.key("tensor").value(rep.tol.tensor);
    w.key("margin").value(rep.tol.margin);
    w.end_object();
    w.key("kappa_residuals").number_array(rep.kappa_residuals);
    w.key("tensor_residuals").begin_array();
    for (const auto& tuple : rep.tensor_residuals) {
        w.begin_object();
        w.key("j").value(tuple.j);
        w.key("max").value(tuple.max_abs());
        w.key("values").number_array(tuple.values);
        w.end_object();
    }
    w.end_array();
    if (rep.isometry_transport_error)
        w.key("isometry_transport_error").value(*rep.isometry_transport_error);
    w.end_object();
    write_text(out_path, w.str());

    if (rep.verdict == Verdict::congruent) return kExitOk;
    if (rep.verdict == Verdict::not_congruent) return kExitNotCongruent;
    return kExitInconclusive;
}

int run_invariants(const std::string& metric_spec, const std::string& curve_spec,
                   double t0, double window, int samples, const std::string& out_path) {
    CurveWithMetric cw = curve_from_spec(curve_spec);
    Preset preset = metric_spec.empty()
                        ? (cw.inferred_metric ? *cw.inferred_metric
                                              : throw ConfigError(
                                                    "curve needs an explicit --preset"))
                        : metric_from_spec(metric_spec);
    const int m = preset.chart.dim();
    if (cw.curve.dim() != m)
        throw ConfigError("curve dimension does not match the metric dimension");

    std::vector<std::string> names;
    std::function<Vec(double)> trace;
    if (preset.name == "g_kappa_tau") {
        names = {"kappa0_tilde", "I1", "kappa1"};
        trace = [&](double t) {
            const Vec iv = homogeneous3_invariants(preset, cw.curve.jet(t, 2));
            return Vec(iv.tail(3));
        };
    } else if (preset.name == "solvable_group") {
        names = {"I1", "I2", "I3"};
        trace = [&](double t) {
            return maurer_cartan_invariants(preset, cw.curve.jet(t, 1));
        };
    } else if (m == 2) {
        names = {"I1", "I2", "I3", "I4"};
        trace = [&](double t) {
            return surface_invariants(preset.chart, cw.curve.jet(t, 1),
                                      preset.gaussian_curvature);
        };
    } else {
        for (int i = 0; i < m; ++i) names.push_back("kappa" + std::to_string(i));
        trace = [&](double t) { return measure_kappas(preset.chart, cw.curve, t); };
    }

    std::string csv = "t";
    for (const auto& n : names) csv += "," + n;
    csv += "\n";
    for (int s = 0; s < samples; ++s) {
        const double t =
            samples == 1 ? t0 : t0 - window + 2.0 * window * s / (samples - 1);
        const Vec v = trace(t);
        csv += format_double(t);
        for (int i = 0; i < v.size(); ++i) csv += "," + format_double(v[i]);
        csv += "\n";
    }
    write_text(out_path, csv);
    return kExitOk;
}

int run_ranks(const std::string& metric_spec, int r_max, int samples, uint64_t seed,
              int threads, const std::string& out_path) {
    const Preset preset = metric_from_spec(metric_spec);
    const auto rows = stability_and_counts(preset, r_max, samples, seed, threads);
    JsonWriter w;
    w.begin_object();
    w.key("preset").value(preset.name);
    w.key("params").begin_object();
    for (const auto& [key, value] : preset.params) w.key(key).value(value);
    w.end_object();
    w.key("samples").value(samples);
    w.key("seed").value(static_cast<long long>(seed));
    w.key("dim_isometry_basis").value(preset.dim_isometry());
    w.key("rows").begin_array();
    for (const auto& row : rows) {
        w.begin_object();
        w.key("r").value(row.r);
        w.key("rank").value(row.rank);
        w.key("stability").value(row.stability);
        w.key("N_r").value(row.n_r);
        w.key("k_r").value(row.k_r);
        w.key("flagged").value(row.flagged);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_text(out_path, w.str());
    return kExitOk;
}

int run_presets(const std::string& out_path) {
    JsonWriter w;
    w.begin_array();
    for (const auto& s : preset_schemas()) {
        w.begin_object();
        w.key("name").value(s.name);
        w.key("parameters").value(s.parameters);
        w.key("notes").value(s.notes);
        w.end_object();
    }
    w.end_array();
    write_text(out_path, w.str());
    return kExitOk;
}

int run_selfcheck(const std::string& preset_name, const std::string& out_path) {
    std::vector<std::string> names;
    if (!preset_name.empty()) {
        names.push_back(parse_spec(preset_name).name);
    } else {
        for (const auto& s : preset_schemas()) names.push_back(s.name);
    }
    bool all = true;
    JsonWriter w;
    w.begin_array();
    for (const auto& name : names) {
        const SelfCheckReport rep = preset_selfcheck(name, {});
        all = all && rep.all_pass();
        w.begin_object();
        w.key("preset").value(rep.preset);
        w.key("all_pass").value(rep.all_pass());
        w.key("items").begin_array();
        for (const auto& item : rep.items) {
            w.begin_object();
            w.key("name").value(item.name);
            w.key("pass").value(item.pass);
            w.key("value").value(item.value);
            w.key("threshold").value(item.threshold);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    write_text(out_path, w.str());
    return all ? kExitOk : kExitError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frenet curves, congruence, and differential invariants on "
                 "Riemannian charts"};
    app.require_subcommand(1);

    std::string config_path, out_path, metric, metric_a, metric_b, curve, curve_a,
        curve_b, criterion = "general", preset_filter;
    double t0 = 0.0, window = 0.25;
    int samples = 51, j_max = 2, r_max = 4, rank_samples = 100, threads = 1,
        csv_thin = 10;
    uint64_t seed = 0;
    bool polar = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--seed", seed, "RNG seed for randomized procedures");
        sub->add_option("--threads", threads, "cap on internal parallelism");
    };

    CLI::App* curvatures = app.add_subcommand("curvatures", "curvature trace of a curve");
    curvatures->add_option("--preset", metric, "metric preset, e.g. euclidean:2");
    curvatures->add_option("--curve", curve, "curve preset or CSV path");
    curvatures->add_option("--t0", t0);
    curvatures->add_option("--window", window);
    curvatures->add_option("--samples", samples);
    add_common(curvatures);

    CLI::App* reconstruct_cmd =
        app.add_subcommand("reconstruct", "integrate a curve from curvature data");
    reconstruct_cmd->add_option("--thin", csv_thin, "CSV row thinning factor");
    add_common(reconstruct_cmd);

    CLI::App* congruence_cmd =
        app.add_subcommand("congruence", "decide congruence of two curves");
    congruence_cmd->add_option("--a", curve_a, "first curve spec");
    congruence_cmd->add_option("--b", curve_b, "second curve spec");
    congruence_cmd->add_option("--metric-a", metric_a);
    congruence_cmd->add_option("--metric-b", metric_b);
    congruence_cmd->add_option("--criterion", criterion,
                               "general | symmetric | constant_curvature");
    congruence_cmd->add_option("--t0", t0);
    congruence_cmd->add_option("--jmax", j_max);
    congruence_cmd->add_option("--window", window);
    congruence_cmd->add_option("--samples", samples);
    congruence_cmd->add_flag("--polar", polar, "attach the polar-map transport check");
    add_common(congruence_cmd);

    CLI::App* invariants_cmd =
        app.add_subcommand("invariants", "invariant traces along a curve");
    invariants_cmd->add_option("--preset", metric);
    invariants_cmd->add_option("--curve", curve);
    invariants_cmd->add_option("--t0", t0);
    invariants_cmd->add_option("--window", window);
    invariants_cmd->add_option("--samples", samples);
    add_common(invariants_cmd);

    CLI::App* ranks_cmd =
        app.add_subcommand("ranks", "prolonged-distribution ranks and counts");
    ranks_cmd->add_option("--preset", metric);
    ranks_cmd->add_option("--rmax", r_max);
    ranks_cmd->add_option("--samples", rank_samples);
    add_common(ranks_cmd);

    CLI::App* presets_cmd = app.add_subcommand("presets", "list shipped presets");
    add_common(presets_cmd);

    CLI::App* selfcheck_cmd =
        app.add_subcommand("selfcheck", "run every preset's validation report");
    selfcheck_cmd->add_option("--preset", preset_filter, "restrict to one preset");
    add_common(selfcheck_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        const ConfigMerge cfg(sub, load_config(config_path));
        cfg.resolve("preset", "preset", metric);
        cfg.resolve("curve", "curve", curve);
        cfg.resolve("a", "a", curve_a);
        cfg.resolve("b", "b", curve_b);
        cfg.resolve("metric-a", "metric_a", metric_a);
        cfg.resolve("metric-b", "metric_b", metric_b);
        cfg.resolve("criterion", "criterion", criterion);
        cfg.resolve("t0", "t0", t0);
        cfg.resolve("window", "window", window);
        cfg.resolve("samples", "samples", samples);
        cfg.resolve("jmax", "j_max", j_max);
        cfg.resolve("rmax", "r_max", r_max);
        cfg.resolve("out", "out", out_path);
        if (window <= 0.0 || samples < 1 || threads < 1)
            throw ConfigError("window, samples, and threads must be positive");

        if (sub == curvatures)
            return run_curvatures(metric, curve, t0, window, samples, out_path);
        if (sub == reconstruct_cmd) return run_reconstruct(cfg.raw(), out_path, csv_thin);
        if (sub == congruence_cmd)
            return run_congruence(curve_a, curve_b, metric_a, metric_b, criterion, t0,
                                  j_max, window, samples, polar, out_path);
        if (sub == invariants_cmd)
            return run_invariants(metric, curve, t0, window, samples, out_path);
        if (sub == ranks_cmd)
            return run_ranks(metric, r_max, rank_samples, seed, threads, out_path);
        if (sub == presets_cmd) return run_presets(out_path);
        if (sub == selfcheck_cmd) return run_selfcheck(preset_filter, out_path);
        throw ConfigError("no subcommand selected");
    } catch (const ClassMismatchError& e) {
        std::cerr << "class mismatch: " << e.what() << "\n";
        return kExitError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
