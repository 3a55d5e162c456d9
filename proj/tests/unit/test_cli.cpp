#include <doctest.h>

#ifdef VFPAIR_CLI_PATH

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "vfpair/analysis.hpp"
#include "vfpair/io.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(VFPAIR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("vfpair_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("definitely-not-a-subcommand") == 2);
    CHECK(run_cli("pair --config /nonexistent/config.json") == 2);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("rndf generates a reference table") {
    TempDir dir;
    const auto out = dir.path / "rndf.csv";
    CHECK(run_cli("rndf --terms 500 --samples 64 --out-file " + out.string()) == 0);
    std::ifstream f(out);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,re,im,abs");
    std::string first;
    std::getline(f, first);
    // R(0) = pi^2/6 within the tail bound
    const double re = std::stod(first.substr(first.find(',') + 1));
    CHECK(std::abs(re - 1.6449340668482264) < 1.0 / 500.0 + 1e-12);
}

TEST_CASE("crow subcommand reports the closed-form analysis") {
    TempDir dir;
    const auto out = dir.path / "crow.json";
    CHECK(run_cli("crow --epsilon 0.05 --b 0.11 --r-c 0.025 --out-file " + out.string()) == 0);
    std::ifstream f(out);
    REQUIRE(f.good());
    std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(all.find("lambda_min") != std::string::npos);
    CHECK(all.find("3.337") != std::string::npos);
}

TEST_CASE("eye rejects an invalid corner angle with a usage error") {
    TempDir dir;
    CHECK(run_cli("eye --b 0.2 --theta 1.5707963 --t-end 0.01 --nodes 64 --out " +
                  (dir.path / "eye").string()) == 2);
}

TEST_CASE("pair run writes a self-describing output directory") {
    TempDir dir;
    const auto out = dir.path / "run";
    write_file(dir.path / "cfg.json", R"({
      "grid": {"n_nodes": 64, "extent": 6.283185307179586},
      "params": {"epsilon": 0.05, "r_c": 0.025, "b": 0.11, "delta": 0.0},
      "integrator": {"abs_tol": 1e-8, "rel_tol": 1e-8},
      "run": {"t_end": 0.02, "sample_dt": 0.01, "snapshot_times": [0.01, 0.02]}
    })");
    CHECK(run_cli("pair --config " + (dir.path / "cfg.json").string() + " --out " +
                  out.string()) == 0);
    CHECK(fs::exists(out / "config.json"));
    CHECK(fs::exists(out / "timeseries.csv"));
    CHECK(fs::exists(out / "snapshot_0000.csv"));
    CHECK(fs::exists(out / "snapshot_0000.json"));
    CHECK(fs::exists(out / "snapshot_0001.csv"));

    const auto series = vfp::read_timeseries(out / "timeseries.csv");
    CHECK(series.size() == 3); // t = 0, 0.01, 0.02

    // rerunning from the stored config reproduces the series bit-exactly
    const auto out2 = dir.path / "run2";
    CHECK(run_cli("pair --config " + (out / "config.json").string() + " --out " +
                  out2.string()) == 0);
    const auto series2 = vfp::read_timeseries(out2 / "timeseries.csv");
    CHECK(series.t == series2.t);
    CHECK(series.impulse == series2.impulse);
    CHECK(series.separation == series2.separation);
}

TEST_CASE("analyze detect works on a stored series") {
    TempDir dir;
    // synthetic series with a monotone-to-oscillatory transition at t = 1
    vfp::TimeSeries s;
    for (double x = 0.0; x <= 1.4; x += 1e-3) {
        s.t.push_back(x);
        const double v = x < 1.0 ? x : x + 0.01 * std::sin(200.0 * (x - 1.0));
        s.impulse.push_back({0.0, v, 0.0});
        s.separation.push_back(1.0);
        s.max_t1_ratio.push_back(0.0);
    }
    vfp::write_timeseries(dir.path / "ts.csv", s);
    const auto report = dir.path / "detect.json";
    CHECK(run_cli("analyze detect --series " + (dir.path / "ts.csv").string() +
                  " --component 2 --out-file " + report.string()) == 0);
    std::ifstream f(report);
    std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(all.find("\"t_rec\"") != std::string::npos);

    // schema mismatch is a data error (exit 3)
    write_file(dir.path / "bad.csv", "not,a,timeseries\n1,2,3\n");
    CHECK(run_cli("analyze detect --series " + (dir.path / "bad.csv").string() +
                  " --component 2 --out-file " + report.string()) == 3);
}

} // TEST_SUITE

#endif // VFPAIR_CLI_PATH
