#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vfp::cli {

// Exit codes: 0 ok, 1 solver failure, 2 usage, 3 data error.
constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

/// Flag values that override what the config file says.
struct Overrides {
    std::optional<std::string> out;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> snapshot_times;
    std::optional<double> t_end;
    std::optional<int> nodes;
    int workers = 1;
};

int cmd_pair(const std::string& config_path, const Overrides& ov);
int cmd_sweep(const std::string& config_path, const Overrides& ov);

struct EyeArgs {
    double b = 0.4;
    double theta = 0.5235987755982988; // pi/6
    double t_end = 4.3;
    int nodes = 512;
    double sample_dt = 1e-3;
    double fraction = 0.20;
    std::string out;
    std::optional<std::string> config;
};
int cmd_eye(const EyeArgs& args, const Overrides& ov);

struct SelfsimArgs {
    std::vector<double> g0{0.5, 0.0, 0.0};
    std::vector<double> g0_prime{0.0, 0.8, 0.6};
    double eta_start = 1e-3;
    double eta_end = 10.0;
    double epsilon = 0.0;
    double tol = 1e-10;
    int samples = 2001;
    std::string out_file;
};
int cmd_selfsim(const SelfsimArgs& args);

struct RndfArgs {
    int terms = 1000;
    int samples = 4096;
    double t_max = 6.283185307179586;
    std::string out_file;
};
int cmd_rndf(const RndfArgs& args);

struct CrowArgs {
    double epsilon = 0.05;
    double b = 0.11;
    double r_c = 0.025;
    std::vector<double> omegas;
    std::string out_file;
};
int cmd_crow(const CrowArgs& args);

struct AnalyzeArgs {
    std::string op; // detect | velocity-fit | separation-fit | fourier | rational
    std::string series;
    std::string run_dir;
    int component = 2;
    double window = 0.05;
    int sign_changes = 3;
    double t_rec = -1.0;
    double fit_from = 0.005;
    double fit_to = 0.045;
    double period = 0.0;
    double t_star = 0.0;
    std::vector<std::string> rationals;
    std::string out_file;
};
int cmd_analyze(const AnalyzeArgs& args);

} // namespace vfp::cli
