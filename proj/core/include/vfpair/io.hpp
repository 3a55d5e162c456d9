#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vfpair/analysis.hpp"
#include "vfpair/geometry.hpp"
#include "vfpair/selfsim.hpp"

namespace vfp {

/// Snapshot on disk: <base>.csv with columns s,x1,x2,x3,T1,T2,T3,modT and
/// <base>.json carrying params, grid, time and the integrator step so any
/// snapshot doubles as a restart checkpoint. Doubles are written with 17
/// significant digits and round-trip bit-exactly.
struct Snapshot {
    FilamentState state;
    ModelParams params;
    double tau = 0.0;
};

void write_snapshot(const std::filesystem::path& base, const FilamentState& state,
                    const ModelParams& params, double tau);

/// Reads <base>.csv + <base>.json. L0/L0' are not part of the snapshot
/// columns; they are reconstructed by the caller from the run configuration
/// (they are immutable run constants).
Snapshot read_snapshot(const std::filesystem::path& base);

void write_timeseries(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_timeseries(const std::filesystem::path& path);

void write_profile_csv(const std::filesystem::path& path, const SelfSimilarProfile& profile);

std::string format_double(double v); // 17 significant digits

} // namespace vfp
