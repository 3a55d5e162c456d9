#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "vfpair/analysis.hpp"
#include "vfpair/errors.hpp"
#include "vfpair/integrator.hpp"
#include "vfpair/io.hpp"
#include "vfpair/selfsim.hpp"

namespace vfp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void usage_error(const std::string& msg) {
    throw Error(ErrorCode::invalid_params, msg);
}

int map_exit(const Error& e) {
    switch (e.code()) {
        case ErrorCode::io_error:
        case ErrorCode::schema_mismatch:
            return kExitData;
        case ErrorCode::invalid_params:
        case ErrorCode::invalid_angle:
        case ErrorCode::grid_too_small:
            return kExitUsage;
        default:
            return kExitSolver;
    }
}

/// Run a command body, mapping library errors onto the documented exit codes
/// and emitting a machine-readable error record.
template <class Fn>
int guarded(Fn&& fn, const fs::path& error_json_dir = {}) {
    try {
        return fn();
    } catch (const Error& e) {
        json err;
        err["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        if (!error_json_dir.empty()) {
            std::error_code ec;
            fs::create_directories(error_json_dir, ec);
            std::ofstream f(error_json_dir / "error.json");
            if (f) f << err.dump(2) << "\n";
        }
        return map_exit(e);
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"code", "Unexpected"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return kExitSolver;
    }
}

json load_json(const fs::path& path) {
    std::ifstream f(path);
    if (!f) usage_error("cannot open config file " + path.string());
    try {
        json j;
        f >> j;
        return j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::schema_mismatch,
                    "config " + path.string() + " is not valid JSON: " + e.what());
    }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::schema_mismatch, "bad config field '" + key + "': " + e.what());
    }
}

struct PairConfig {
    Grid grid{1500, kTwoPi};
    ModelParams params{0.05, 5e-3, 0.1118033988749895, 0.005590169943749474};
    IntegratorConfig integrator;
    double t_end = 1.6;
    double sample_dt = 1e-3;
    std::vector<double> snapshot_times;
    double impulse_fraction = 0.20;
    double noise_amplitude = 0.0;
    std::uint64_t seed = 0;
    int detect_component = 1;
};

PairConfig parse_pair_config(const json& j, const Overrides& ov) {
    PairConfig c;
    if (j.contains("grid")) {
        c.grid.n_nodes = get_or(j["grid"], "n_nodes", c.grid.n_nodes);
        c.grid.extent = get_or(j["grid"], "extent", c.grid.extent);
    }
    if (j.contains("params")) {
        const json& p = j["params"];
        c.params.epsilon = get_or(p, "epsilon", c.params.epsilon);
        c.params.r_c = get_or(p, "r_c", c.params.r_c);
        c.params.b = get_or(p, "b", c.params.b);
        c.params.delta = get_or(p, "delta", c.params.delta);
    }
    if (j.contains("integrator")) {
        const json& p = j["integrator"];
        c.integrator.abs_tol = get_or(p, "abs_tol", c.integrator.abs_tol);
        c.integrator.rel_tol = get_or(p, "rel_tol", c.integrator.rel_tol);
        c.integrator.tau_init = get_or(p, "tau_init", c.integrator.tau_init);
        c.integrator.tau_min = get_or(p, "tau_min", c.integrator.tau_min);
        c.integrator.tau_max = get_or(p, "tau_max", c.integrator.tau_max);
        c.integrator.safety = get_or(p, "safety", c.integrator.safety);
        c.integrator.stability_guard = get_or(p, "stability_guard", c.integrator.stability_guard);
        c.integrator.max_steps = get_or(p, "max_steps", c.integrator.max_steps);
    }
    if (j.contains("run")) {
        const json& p = j["run"];
        c.t_end = get_or(p, "t_end", c.t_end);
        c.sample_dt = get_or(p, "sample_dt", c.sample_dt);
        c.snapshot_times = get_or(p, "snapshot_times", c.snapshot_times);
        c.impulse_fraction = get_or(p, "impulse_fraction", c.impulse_fraction);
        c.noise_amplitude = get_or(p, "noise_amplitude", c.noise_amplitude);
        c.seed = get_or(p, "seed", c.seed);
        c.detect_component = get_or(p, "detect_component", c.detect_component);
    }
    if (ov.tol) c.integrator.abs_tol = c.integrator.rel_tol = *ov.tol;
    if (ov.seed) c.seed = *ov.seed;
    if (ov.snapshot_times) c.snapshot_times = *ov.snapshot_times;
    if (ov.t_end) c.t_end = *ov.t_end;
    if (ov.nodes) c.grid.n_nodes = *ov.nodes;
    return c;
}

json pair_config_to_json(const PairConfig& c) {
    json j;
    j["grid"] = {{"n_nodes", c.grid.n_nodes}, {"extent", c.grid.extent}};
    j["params"] = {{"epsilon", c.params.epsilon},
                   {"r_c", c.params.r_c},
                   {"b", c.params.b},
                   {"delta", c.params.delta}};
    j["integrator"] = {{"abs_tol", c.integrator.abs_tol},
                       {"rel_tol", c.integrator.rel_tol},
                       {"tau_init", c.integrator.tau_init},
                       {"tau_min", c.integrator.tau_min},
                       {"tau_max", c.integrator.tau_max},
                       {"safety", c.integrator.safety},
                       {"stability_guard", c.integrator.stability_guard},
                       {"max_steps", c.integrator.max_steps}};
    j["run"] = {{"t_end", c.t_end},
                {"sample_dt", c.sample_dt},
                {"snapshot_times", c.snapshot_times},
                {"impulse_fraction", c.impulse_fraction},
                {"noise_amplitude", c.noise_amplitude},
                {"seed", c.seed},
                {"detect_component", c.detect_component}};
    return j;
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    f << j.dump(2) << "\n";
}

int run_pair_into(const PairConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    write_json_file(out / "config.json", pair_config_to_json(cfg));

    const auto st = init_perturbed_pair(cfg.grid, cfg.params, cfg.noise_amplitude, cfg.seed);
    DiagnosticsRecorder rec(cfg.params, cfg.impulse_fraction);

    int snap_index = 0;
    RunOptions opts;
    opts.t_end = cfg.t_end;
    opts.sample_dt = cfg.sample_dt;
    opts.snapshot_times = cfg.snapshot_times;
    opts.on_sample = [&](const FilamentState& s) { rec.record(s); };
    opts.on_snapshot = [&](const FilamentState& s, double tau) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04d", snap_index++);
        write_snapshot(out / name, s, cfg.params, tau);
    };

    const auto res = run(st, cfg.params, cfg.integrator, opts);
    write_timeseries(out / "timeseries.csv", rec.series());
    write_snapshot(out / "snapshot_final", res.state, cfg.params, res.tau_final);

    json rep;
    rep["status"] = res.status == RunStatus::ok ? "ok" : res.message;
    rep["steps"] = res.steps;
    rep["rejections"] = res.rejections;
    rep["t_final"] = res.state.time;
    rep["max_modulus_drift_pre"] = res.max_modulus_drift_pre;
    rep["max_modulus_drift_post"] = res.max_modulus_drift_post;
    rep["min_tau_accepted"] = res.min_tau_accepted;
    rep["max_tau_accepted"] = res.max_tau_accepted;
    const auto hit = try_detect_reconnection(
        rec.series().t, rec.series().impulse_component(cfg.detect_component));
    if (hit) rep["t_rec"] = *hit;
    write_json_file(out / "run.json", rep);

    if (res.status != RunStatus::ok)
        throw Error(res.status == RunStatus::step_underflow ? ErrorCode::step_underflow
                                                            : ErrorCode::stage_blowup,
                    res.message + " (last good state saved to snapshot_final)");
    return kExitOk;
}

std::vector<std::pair<int, int>> parse_rationals(const std::vector<std::string>& items) {
    std::vector<std::pair<int, int>> out;
    for (const auto& s : items) {
        const auto slash = s.find('/');
        if (slash == std::string::npos) {
            out.emplace_back(std::stoi(s), 1);
        } else {
            out.emplace_back(std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1)));
        }
    }
    return out;
}

} // namespace

int cmd_pair(const std::string& config_path, const Overrides& ov) {
    const fs::path out = ov.out ? fs::path(*ov.out) : fs::path("pair_out");
    return guarded(
        [&] {
            const PairConfig cfg = parse_pair_config(load_json(config_path), ov);
            return run_pair_into(cfg, out);
        },
        out);
}

int cmd_sweep(const std::string& config_path, const Overrides& ov) {
    const fs::path out = ov.out ? fs::path(*ov.out) : fs::path("sweep_out");
    return guarded(
        [&] {
            const json j = load_json(config_path);
            if (!j.contains("sweep")) usage_error("sweep config needs a 'sweep' section");
            const std::string param = get_or<std::string>(j["sweep"], "parameter", "r_c");
            const auto values = get_or<std::vector<double>>(j["sweep"], "values", {});
            if (values.empty()) usage_error("sweep needs a nonempty 'values' list");
            int workers = get_or(j["sweep"], "workers", ov.workers);
            if (ov.workers > 1) workers = ov.workers;
            workers = std::max(1, workers);

            fs::create_directories(out);
            std::mutex mtx;
            std::size_t next = 0;
            int failures = 0;
            auto worker = [&] {
                for (;;) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lock(mtx);
                        if (next >= values.size()) return;
                        i = next++;
                    }
                    PairConfig cfg = parse_pair_config(j, ov);
                    if (param == "r_c") {
                        cfg.params.r_c = values[i];
                    } else if (param == "epsilon") {
                        cfg.params.epsilon = values[i];
                        cfg.params.b = std::sqrt(values[i]) / 2.0;
                        cfg.params.delta = cfg.params.b / 20.0;
                    } else {
                        usage_error("unknown sweep parameter '" + param + "'");
                    }
                    char leaf[64];
                    std::snprintf(leaf, sizeof(leaf), "%s_%g", param.c_str(), values[i]);
                    const int rc = guarded([&] { return run_pair_into(cfg, out / leaf); },
                                           out / leaf);
                    if (rc != kExitOk) {
                        std::lock_guard<std::mutex> lock(mtx);
                        ++failures;
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            return failures == 0 ? kExitOk : kExitSolver;
        },
        out);
}

int cmd_eye(const EyeArgs& args, const Overrides& ov) {
    const fs::path out = ov.out ? fs::path(*ov.out) : fs::path(args.out.empty() ? "eye_out" : args.out);
    return guarded(
        [&] {
            EyeArgs a = args;
            if (ov.t_end) a.t_end = *ov.t_end;
            if (ov.nodes) a.nodes = *ov.nodes;
            if (a.config) {
                const json j = load_json(*a.config);
                if (j.contains("eye")) {
                    a.b = get_or(j["eye"], "b", a.b);
                    a.theta = get_or(j["eye"], "theta", a.theta);
                    a.t_end = get_or(j["eye"], "t_end", a.t_end);
                    a.nodes = get_or(j["eye"], "nodes", a.nodes);
                    a.sample_dt = get_or(j["eye"], "sample_dt", a.sample_dt);
                    a.fraction = get_or(j["eye"], "fraction", a.fraction);
                }
            }
            const Grid grid = Grid::make(a.nodes, kTwoPi);
            const auto st = init_eye(grid, a.b, a.theta);
            ModelParams p{0.0, 0.0, 0.0, 0.0}; // pure local induction
            IntegratorConfig icfg;
            if (ov.tol) icfg.abs_tol = icfg.rel_tol = *ov.tol;

            fs::create_directories(out);
            json cj;
            cj["eye"] = {{"b", a.b},           {"theta", a.theta},
                         {"t_end", a.t_end},   {"nodes", a.nodes},
                         {"sample_dt", a.sample_dt}, {"fraction", a.fraction}};
            cj["integrator"] = {{"abs_tol", icfg.abs_tol}, {"rel_tol", icfg.rel_tol}};
            write_json_file(out / "config.json", cj);

            ShapeDescriptor descr(st);
            TimeSeries series;
            std::vector<double> ts, ds;
            std::vector<Vec3> corner;
            RunOptions opts;
            opts.t_end = a.t_end;
            opts.sample_dt = a.sample_dt;
            opts.on_sample = [&](const FilamentState& s) {
                ts.push_back(s.time);
                ds.push_back(descr(s));
                corner.push_back(s.X[0]);
                series.t.push_back(s.time);
                series.impulse.push_back(fluid_impulse(s, 0, a.fraction));
                series.separation.push_back(separation(s));
                double ratio = 0.0;
                for (const Vec3& t : s.T) ratio = std::max(ratio, std::abs(t.x) / norm(t));
                series.max_t1_ratio.push_back(ratio);
            };
            const auto res = run(st, p, icfg, opts);
            write_timeseries(out / "timeseries.csv", series);
            write_snapshot(out / "snapshot_final", res.state, p, res.tau_final);

            {
                std::ofstream f(out / "trajectory.csv");
                f << "t,x1,x2,x3\n";
                for (std::size_t i = 0; i < ts.size(); ++i)
                    f << format_double(ts[i]) << ',' << format_double(corner[i].x) << ','
                      << format_double(corner[i].y) << ',' << format_double(corner[i].z) << '\n';
            }
            {
                std::ofstream f(out / "descriptor.csv");
                f << "t,shape_distance\n";
                for (std::size_t i = 0; i < ts.size(); ++i)
                    f << format_double(ts[i]) << ',' << format_double(ds[i]) << '\n';
            }

            json rep;
            rep["status"] = res.status == RunStatus::ok ? "ok" : res.message;
            rep["steps"] = res.steps;
            if (res.status == RunStatus::ok && a.t_end > 4.2) {
                const double period = estimate_quasi_period(ts, ds, 2.5, std::min(a.t_end, 4.25));
                rep["quasi_period"] = period;
            }
            write_json_file(out / "eye.json", rep);
            if (res.status != RunStatus::ok)
                throw Error(ErrorCode::stage_blowup, res.message);
            return kExitOk;
        },
        out);
}

int cmd_selfsim(const SelfsimArgs& args) {
    return guarded([&] {
        if (args.g0.size() != 3 || args.g0_prime.size() != 3)
            usage_error("--g0 and --g0-prime need exactly 3 components");
        ModelParams p{args.epsilon, 0.0, 0.0, 0.0};
        const auto prof = selfsim_integrate({args.g0[0], args.g0[1], args.g0[2]},
                                            {args.g0_prime[0], args.g0_prime[1], args.g0_prime[2]},
                                            args.eta_start, args.eta_end, p, args.tol,
                                            args.samples);
        const fs::path out = args.out_file.empty() ? fs::path("profile.csv")
                                                   : fs::path(args.out_file);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        write_profile_csv(out, prof);

        json rep;
        rep["residual_pre_reduction_form"] = selfsim_residual(prof);
        double drift = 0.0;
        const double n0 = norm(prof.G_prime.front());
        for (const Vec3& gp : prof.G_prime) drift = std::max(drift, std::abs(norm(gp) - n0));
        rep["gprime_norm_drift"] = drift;
        std::cout << rep.dump(2) << "\n";
        return kExitOk;
    });
}

int cmd_rndf(const RndfArgs& args) {
    return guarded([&] {
        if (args.terms < 1 || args.samples < 1) usage_error("terms and samples must be >= 1");
        const fs::path out = args.out_file.empty() ? fs::path("rndf.csv") : fs::path(args.out_file);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        std::ofstream f(out);
        if (!f) throw Error(ErrorCode::io_error, "cannot write " + out.string());
        f << "t,re,im,abs\n";
        for (int i = 0; i < args.samples; ++i) {
            const double t = args.t_max * i / args.samples;
            const auto r = rndf(t, args.terms);
            f << format_double(t) << ',' << format_double(r.value.real()) << ','
              << format_double(r.value.imag()) << ',' << format_double(std::abs(r.value)) << '\n';
        }
        return kExitOk;
    });
}

int cmd_crow(const CrowArgs& args) {
    return guarded([&] {
        ModelParams p{args.epsilon, args.r_c, args.b, 0.0};
        std::vector<double> omegas = args.omegas;
        CrowResult head = crow_analysis(p, {});
        if (omegas.empty()) {
            for (int i = 0; i <= 64; ++i) omegas.push_back(2.0 * head.omega_threshold * i / 64.0);
        }
        const auto res = crow_analysis(p, omegas);
        json rep;
        rep["epsilon"] = p.epsilon;
        rep["b"] = p.b;
        rep["r_c"] = p.r_c;
        rep["omega_threshold"] = res.omega_threshold;
        rep["lambda_min"] = res.lambda_min;
        rep["translation_velocity"] = res.translation_velocity;
        json evs = json::array();
        for (std::size_t i = 0; i < res.omegas.size(); ++i) {
            json row;
            row["omega"] = res.omegas[i];
            json vals = json::array();
            for (const auto& ev : res.eigenvalues[i])
                vals.push_back({{"re", ev.real()}, {"im", ev.imag()}});
            row["eigenvalues"] = vals;
            row["unstable"] = res.unstable(i);
            evs.push_back(row);
        }
        rep["modes"] = evs;
        if (args.out_file.empty()) {
            std::cout << rep.dump(2) << "\n";
        } else {
            const fs::path out(args.out_file);
            if (out.has_parent_path()) fs::create_directories(out.parent_path());
            write_json_file(out, rep);
        }
        return kExitOk;
    });
}

namespace {

json analyze_detect(const AnalyzeArgs& a) {
    const auto series = read_timeseries(a.series);
    DetectorConfig cfg;
    cfg.window = a.window;
    cfg.min_extra_sign_changes = a.sign_changes;
    json rep;
    rep["component"] = a.component;
    rep["window"] = cfg.window;
    rep["min_extra_sign_changes"] = cfg.min_extra_sign_changes;
    const double t_rec = detect_reconnection(series, a.component, cfg);
    rep["t_rec"] = t_rec;
    if (series.t.size() > 1) rep["resolution"] = series.t[1] - series.t[0];
    return rep;
}

json analyze_velocity_fit(const AnalyzeArgs& a) {
    // fit mean x2 over the stored snapshots against the closed-form speed
    std::vector<fs::path> bases;
    for (const auto& entry : fs::directory_iterator(a.run_dir)) {
        const auto p = entry.path();
        if (p.extension() == ".json" && p.stem().string().rfind("snapshot_", 0) == 0) {
            fs::path base = p;
            base.replace_extension();
            bases.push_back(base);
        }
    }
    std::sort(bases.begin(), bases.end());
    if (bases.size() < 2)
        throw Error(ErrorCode::schema_mismatch, "need at least two snapshots in " + a.run_dir);
    std::vector<double> t, x2;
    ModelParams params;
    for (const auto& b : bases) {
        const auto snap = read_snapshot(b);
        t.push_back(snap.state.time);
        x2.push_back(mean_x2(snap.state));
        params = snap.params;
    }
    const auto fit = fit_linear(t, x2);
    const double expect = -params.epsilon * params.b / (params.b * params.b + params.r_c * params.r_c);
    json rep;
    rep["measured_drift_rate"] = fit.slope;
    rep["closed_form_velocity"] = expect;
    rep["relative_error"] = std::abs(fit.slope - expect) / std::abs(expect);
    rep["snapshots_used"] = bases.size();
    return rep;
}

json analyze_separation_fit(const AnalyzeArgs& a) {
    const auto series = read_timeseries(a.series);
    double t_rec = a.t_rec;
    if (t_rec < 0.0) t_rec = detect_reconnection(series, a.component);
    std::vector<double> dt, sep;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double d = series.t[i] - t_rec;
        if (d >= a.fit_from && d <= a.fit_to && series.separation[i] > 0.0) {
            dt.push_back(d);
            sep.push_back(series.separation[i]);
        }
    }
    const auto fit = fit_power_law(dt, sep);
    json rep;
    rep["t_rec"] = t_rec;
    rep["fit_window"] = {a.fit_from, a.fit_to};
    rep["exponent"] = fit.exponent;
    rep["points_used"] = fit.points_used;
    return rep;
}

json analyze_fourier(const AnalyzeArgs& a) {
    // trajectory CSV (t,x1,x2,x3): spectrum of x2 + i*x3 over one period
    std::ifstream f(a.series);
    if (!f) throw Error(ErrorCode::io_error, "cannot read " + a.series);
    std::string line;
    std::getline(f, line);
    if (line.rfind("t,x1", 0) != 0)
        throw Error(ErrorCode::schema_mismatch, "expected a trajectory CSV with header t,x1,x2,x3");
    std::vector<double> t, v2, v3;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        double a0, a1, a2, a3;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a0, &a1, &a2, &a3) != 4)
            throw Error(ErrorCode::schema_mismatch, "bad trajectory row: " + line);
        t.push_back(a0);
        v2.push_back(a2);
        v3.push_back(a3);
    }
    const double period = a.period > 0.0 ? a.period : t.back();
    std::size_t iend = 0;
    while (iend + 1 < t.size() && t[iend + 1] < period) ++iend;
    const double s2 = (v2[iend] - v2[0]) / (t[iend] - t[0]);
    const double s3 = (v3[iend] - v3[0]) / (t[iend] - t[0]);
    for (std::size_t i = 0; i < t.size(); ++i) {
        v2[i] -= s2 * (t[i] - t[0]);
        v3[i] -= s3 * (t[i] - t[0]);
    }
    const int m = 4096;
    const auto u2 = resample_uniform(t, v2, period, m);
    const auto u3 = resample_uniform(t, v3, period, m);
    std::vector<std::complex<double>> sig(m);
    for (int i = 0; i < m; ++i) sig[i] = {u2[i], u3[i]};
    const auto dom = fourier_square_dominance(sig, 1, 5);
    json rep;
    rep["period"] = period;
    rep["indices"] = dom.square_indices;
    json mags = json::array(), nbs = json::array();
    for (std::size_t i = 0; i < dom.square_energy.size(); ++i) {
        mags.push_back(std::sqrt(dom.square_energy[i]));
        nbs.push_back(std::sqrt(dom.neighbor_energy[i]));
    }
    rep["magnitudes"] = mags;
    rep["neighbor_magnitudes"] = nbs;
    rep["dominance_ratio"] = dom.dominance_ratio;
    return rep;
}

json analyze_rational(const AnalyzeArgs& a) {
    const auto series = read_timeseries(a.series);
    std::vector<double> values(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        values[i] = a.component == 0 ? norm(series.impulse[i])
                                     : series.impulse[i][a.component - 1];
    auto rationals = parse_rationals(a.rationals);
    if (rationals.empty())
        rationals = {{3, 11}, {1, 3}, {3, 7}, {3, 5}, {1, 1}};
    const auto markers = rational_probe(series.t, values, a.t_star, rationals);
    json rep = json::array();
    for (const auto& m : markers) {
        const char* cls = m.classification == ProbeClass::maximum
                              ? "maximum"
                              : (m.classification == ProbeClass::minimum ? "minimum" : "neither");
        rep.push_back({{"p", m.p}, {"q", m.q}, {"t", m.t}, {"class", cls},
                       {"peak_size", m.peak_size}});
    }
    return json{{"t_star", a.t_star}, {"markers", rep}};
}

} // namespace

int cmd_analyze(const AnalyzeArgs& args) {
    return guarded([&] {
        json rep;
        if (args.op == "detect") {
            rep = analyze_detect(args);
        } else if (args.op == "velocity-fit") {
            rep = analyze_velocity_fit(args);
        } else if (args.op == "separation-fit") {
            rep = analyze_separation_fit(args);
        } else if (args.op == "fourier") {
            rep = analyze_fourier(args);
        } else if (args.op == "rational") {
            rep = analyze_rational(args);
        } else {
            usage_error("unknown analyze op '" + args.op + "'");
        }
        if (args.out_file.empty()) {
            std::cout << rep.dump(2) << "\n";
        } else {
            const fs::path out(args.out_file);
            if (out.has_parent_path()) fs::create_directories(out.parent_path());
            write_json_file(out, rep);
        }
        return kExitOk;
    });
}

} // namespace vfp::cli
