#include "vfpair/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "vfpair/errors.hpp"

namespace vfp {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    if (ec != std::errc()) throw Error(ErrorCode::io_error, "to_chars failed");
    return std::string(buf, ptr);
}

namespace {

double parse_double(std::string_view sv) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc())
        throw Error(ErrorCode::schema_mismatch, "bad number: '" + std::string(sv) + "'");
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + p.string());
    return f;
}

std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw Error(ErrorCode::io_error, "cannot read " + p.string());
    return f;
}

} // namespace

void write_snapshot(const std::filesystem::path& base, const FilamentState& state,
                    const ModelParams& params, double tau) {
    std::filesystem::path csv = base;
    csv += ".csv";
    std::filesystem::path meta = base;
    meta += ".json";

    auto f = open_out(csv);
    f << "s,x1,x2,x3,T1,T2,T3,modT\n";
    const double h = state.grid.spacing();
    for (std::size_t j = 0; j < state.size(); ++j) {
        const Vec3& x = state.X[j];
        const Vec3& t = state.T[j];
        f << format_double(j * h) << ',' << format_double(x.x) << ',' << format_double(x.y)
          << ',' << format_double(x.z) << ',' << format_double(t.x) << ','
          << format_double(t.y) << ',' << format_double(t.z) << ','
          << format_double(norm(t)) << '\n';
    }

    json md;
    md["format"] = "vfpair-snapshot";
    md["version"] = 1;
    md["time"] = format_double(state.time);
    md["tau"] = format_double(tau);
    md["grid"] = {{"n_nodes", state.grid.n_nodes}, {"extent", format_double(state.grid.extent)}};
    md["params"] = {{"epsilon", format_double(params.epsilon)},
                    {"r_c", format_double(params.r_c)},
                    {"b", format_double(params.b)},
                    {"delta", format_double(params.delta)}};
    md["period_offset"] = {format_double(state.period_offset.x),
                           format_double(state.period_offset.y),
                           format_double(state.period_offset.z)};
    auto g = open_out(meta);
    g << md.dump(2) << '\n';
}

Snapshot read_snapshot(const std::filesystem::path& base) {
    std::filesystem::path csv = base;
    csv += ".csv";
    std::filesystem::path meta = base;
    meta += ".json";

    json md;
    try {
        auto g = open_in(meta);
        g >> md;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::schema_mismatch, std::string("bad snapshot metadata: ") + e.what());
    }
    if (md.value("format", "") != "vfpair-snapshot")
        throw Error(ErrorCode::schema_mismatch, "not a snapshot metadata file: " + meta.string());

    auto as_double = [](const json& j) -> double {
        if (j.is_string()) return parse_double(j.get<std::string>());
        return j.get<double>();
    };

    Snapshot snap;
    snap.state.grid = Grid{md["grid"]["n_nodes"].get<int>(), as_double(md["grid"]["extent"])};
    snap.state.time = as_double(md["time"]);
    snap.tau = as_double(md["tau"]);
    snap.params.epsilon = as_double(md["params"]["epsilon"]);
    snap.params.r_c = as_double(md["params"]["r_c"]);
    snap.params.b = as_double(md["params"]["b"]);
    snap.params.delta = as_double(md["params"]["delta"]);
    snap.state.period_offset = {as_double(md["period_offset"][0]),
                                as_double(md["period_offset"][1]),
                                as_double(md["period_offset"][2])};

    auto f = open_in(csv);
    std::string line;
    if (!std::getline(f, line) || line.rfind("s,x1", 0) != 0)
        throw Error(ErrorCode::schema_mismatch, "missing snapshot CSV header in " + csv.string());
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 8)
            throw Error(ErrorCode::schema_mismatch, "snapshot row needs 8 columns");
        snap.state.X.push_back({parse_double(cols[1]), parse_double(cols[2]), parse_double(cols[3])});
        snap.state.T.push_back({parse_double(cols[4]), parse_double(cols[5]), parse_double(cols[6])});
    }
    if (static_cast<int>(snap.state.X.size()) != snap.state.grid.n_nodes)
        throw Error(ErrorCode::schema_mismatch, "snapshot row count does not match grid");
    return snap;
}

void write_timeseries(const std::filesystem::path& path, const TimeSeries& series) {
    auto f = open_out(path);
    f << "t,F1,F2,F3,separation,maxT1ratio\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        f << format_double(series.t[i]) << ',' << format_double(series.impulse[i].x) << ','
          << format_double(series.impulse[i].y) << ',' << format_double(series.impulse[i].z)
          << ',' << format_double(series.separation[i]) << ','
          << format_double(series.max_t1_ratio[i]) << '\n';
    }
}

TimeSeries read_timeseries(const std::filesystem::path& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("t,F1", 0) != 0)
        throw Error(ErrorCode::schema_mismatch, "missing timeseries header in " + path.string());
    TimeSeries s;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 6)
            throw Error(ErrorCode::schema_mismatch, "timeseries row needs 6 columns");
        s.t.push_back(parse_double(cols[0]));
        s.impulse.push_back({parse_double(cols[1]), parse_double(cols[2]), parse_double(cols[3])});
        s.separation.push_back(parse_double(cols[4]));
        s.max_t1_ratio.push_back(parse_double(cols[5]));
    }
    return s;
}

void write_profile_csv(const std::filesystem::path& path, const SelfSimilarProfile& profile) {
    auto f = open_out(path);
    f << "eta,G1,G2,G3,Gp1,Gp2,Gp3\n";
    for (std::size_t i = 0; i < profile.etas.size(); ++i) {
        const Vec3& g = profile.G[i];
        const Vec3& gp = profile.G_prime[i];
        f << format_double(profile.etas[i]) << ',' << format_double(g.x) << ','
          << format_double(g.y) << ',' << format_double(g.z) << ',' << format_double(gp.x)
          << ',' << format_double(gp.y) << ',' << format_double(gp.z) << '\n';
    }
}

} // namespace vfp
