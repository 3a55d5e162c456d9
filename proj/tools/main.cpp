#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace vfp::cli;

int main(int argc, char** argv) {
    CLI::App app{"vfpair: regularized vortex-filament pair solver and diagnostics"};
    app.require_subcommand(0, 1);

    Overrides ov;
    std::string out_dir;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> snapshot_times;
    double t_end = 0.0;
    int nodes = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--tol", tol, "absolute and relative tolerance");
        sub->add_option("--seed", seed, "seed for the noise generator");
        sub->add_option("--snapshot-times", snapshot_times, "times to write snapshots at")
            ->delimiter(',');
        sub->add_option("--t-end", t_end, "end time");
        sub->add_option("--nodes", nodes, "grid nodes");
        sub->add_option("--workers", ov.workers, "parallel workers for sweeps");
    };
    auto collect = [&](CLI::App* sub) {
        if (sub->count("--out")) ov.out = out_dir;
        if (sub->count("--tol")) ov.tol = tol;
        if (sub->count("--seed")) ov.seed = seed;
        if (sub->count("--snapshot-times")) ov.snapshot_times = snapshot_times;
        if (sub->count("--t-end")) ov.t_end = t_end;
        if (sub->count("--nodes")) ov.nodes = nodes;
    };

    int rc = kExitOk;

    // pair
    std::string pair_config;
    auto* pair = app.add_subcommand("pair", "antiparallel pair run from a JSON config");
    pair->add_option("--config", pair_config, "JSON run configuration")->required();
    add_common(pair);
    pair->callback([&] {
        collect(pair);
        rc = cmd_pair(pair_config, ov);
    });

    // sweep
    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep of pair problems");
    sweep->add_option("--config", sweep_config, "JSON config with a 'sweep' section")->required();
    add_common(sweep);
    sweep->callback([&] {
        collect(sweep);
        rc = cmd_sweep(sweep_config, ov);
    });

    // eye
    EyeArgs eye_args;
    std::string eye_config;
    auto* eye = app.add_subcommand("eye", "eye-shaped vortex under pure local induction");
    eye->add_option("--b", eye_args.b, "eye thickness");
    eye->add_option("--theta", eye_args.theta, "corner angle");
    eye->add_option("--sample-dt", eye_args.sample_dt, "diagnostic sampling step");
    eye->add_option("--fraction", eye_args.fraction, "impulse window fraction of the perimeter");
    eye->add_option("--config", eye_config, "optional JSON config with an 'eye' section");
    add_common(eye);
    eye->callback([&] {
        collect(eye);
        if (!eye_config.empty()) eye_args.config = eye_config;
        if (ov.t_end) eye_args.t_end = *ov.t_end;
        if (ov.nodes) eye_args.nodes = *ov.nodes;
        rc = cmd_eye(eye_args, ov);
    });

    // selfsim
    SelfsimArgs ss;
    auto* selfsim = app.add_subcommand("selfsim", "integrate the self-similar profile ODE");
    selfsim->add_option("--g0", ss.g0, "G at eta_start (3 components)")->expected(3);
    selfsim->add_option("--g0-prime", ss.g0_prime, "G' at eta_start (3 components)")->expected(3);
    selfsim->add_option("--eta-start", ss.eta_start, "start of the similarity variable");
    selfsim->add_option("--eta-end", ss.eta_end, "end of the similarity variable");
    selfsim->add_option("--epsilon", ss.epsilon, "interaction strength (r_c is zero here)");
    selfsim->add_option("--tol", ss.tol, "integration tolerance");
    selfsim->add_option("--samples", ss.samples, "stored sample count");
    selfsim->add_option("--out-file", ss.out_file, "profile CSV path");
    selfsim->callback([&] { rc = cmd_selfsim(ss); });

    // rndf
    RndfArgs rn;
    auto* rndf = app.add_subcommand("rndf", "tabulate the reference multifractal partial sum");
    rndf->add_option("--terms", rn.terms, "partial-sum terms");
    rndf->add_option("--samples", rn.samples, "sample count");
    rndf->add_option("--t-max", rn.t_max, "sampling interval end");
    rndf->add_option("--out-file", rn.out_file, "CSV path");
    rndf->callback([&] { rc = cmd_rndf(rn); });

    // crow
    CrowArgs cr;
    auto* crow = app.add_subcommand("crow", "linear stability of the straight pair");
    crow->add_option("--epsilon", cr.epsilon, "interaction strength");
    crow->add_option("--b", cr.b, "half separation");
    crow->add_option("--r-c", cr.r_c, "core radius");
    crow->add_option("--omegas", cr.omegas, "wavenumbers to tabulate")->delimiter(',');
    crow->add_option("--out-file", cr.out_file, "JSON report path");
    crow->callback([&] { rc = cmd_crow(cr); });

    // analyze
    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "post-process stored run outputs");
    analyze->add_option("op", an.op,
                        "one of: detect, velocity-fit, separation-fit, fourier, rational")
        ->required();
    analyze->add_option("--series", an.series, "timeseries or trajectory CSV");
    analyze->add_option("--run-dir", an.run_dir, "run directory with snapshots");
    analyze->add_option("--component", an.component, "impulse component (0 = magnitude)");
    analyze->add_option("--window", an.window, "detector persistence window");
    analyze->add_option("--sign-changes", an.sign_changes, "detector sign-change count");
    analyze->add_option("--t-rec", an.t_rec, "override the reconnection time");
    analyze->add_option("--fit-from", an.fit_from, "fit window start offset");
    analyze->add_option("--fit-to", an.fit_to, "fit window end offset");
    analyze->add_option("--period", an.period, "resampling period for spectra");
    analyze->add_option("--t-star", an.t_star, "reference time for rational probes");
    analyze->add_option("--rationals", an.rationals, "p/q list")->delimiter(',');
    analyze->add_option("--out-file", an.out_file, "JSON report path");
    analyze->callback([&] { rc = cmd_analyze(an); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (app.get_subcommands().empty()) {
        std::puts(app.help().c_str());
        return kExitUsage;
    }
    return rc;
}
