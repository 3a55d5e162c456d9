#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vfpair/vec3.hpp"

namespace vfp {

/// 8th-order symmetric 9-point finite difference weights for first or second
/// derivatives on a uniform periodic grid.
struct DiffOperator {
    int order = 1;                  // 1 or 2
    static constexpr int accuracy = 8;
    static constexpr int half_width = 4;
    double h = 1.0;
    std::array<double, 9> weights{}; // offsets -4..+4, already divided by h^order

    static DiffOperator first(double h);
    static DiffOperator second(double h);

    void apply(const Vec3* in, Vec3* out, std::size_t n) const;
    void apply(const double* in, double* out, std::size_t n) const;
};

/// Periodic componentwise derivative of a sampled field. Throws GridTooSmall
/// when fewer than 9 samples are supplied.
std::vector<Vec3> differentiate(const std::vector<Vec3>& values, int order, double h);
std::vector<double> differentiate(const std::vector<double>& values, int order, double h);

} // namespace vfp
