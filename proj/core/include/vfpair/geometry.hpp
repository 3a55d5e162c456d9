#pragma once

#include <cstdint>
#include <vector>

#include "vfpair/vec3.hpp"

namespace vfp {

/// Uniform grid in the curve parameter s on (0, S), node j at s_j = j*h.
struct Grid {
    int n_nodes = 0;
    double extent = 0.0;

    double spacing() const { return extent / n_nodes; }
    double param(int j) const { return spacing() * j; }

    static Grid make(int n_nodes, double extent);
    void validate() const;
};

/// Model parameters: interaction strength, regularization core radius,
/// initial half-separation and perturbation amplitude.
struct ModelParams {
    double epsilon = 0.0;
    double r_c = 0.0;
    double b = 0.0;
    double delta = 0.0;

    void validate_pair() const;
};

/// Sampled filament: positions X and tangent field T on a periodic grid,
/// plus the reference tangent-modulus data fixed by the initial condition.
/// period_offset is X(s + S) - X(s); zero for closed curves.
struct FilamentState {
    Grid grid;
    std::vector<Vec3> X;
    std::vector<Vec3> T;
    std::vector<double> L0;
    std::vector<double> L0_prime;
    double time = 0.0;
    Vec3 period_offset{};

    std::size_t size() const { return X.size(); }
};

/// Mirror-perturbed antiparallel pair: X(s) = (b - delta*cos s, -delta*cos s, s - S/2).
/// The mirror filament (-x1, x2, x3) is implicit and never stored.
/// With noise_amplitude > 0, seeded Gaussian noise is added per node to x1 and
/// x2, tangents are then taken from the stencil derivative so state
/// consistency holds by construction.
FilamentState init_perturbed_pair(const Grid& grid, const ModelParams& params,
                                  double noise_amplitude = 0.0, std::uint64_t seed = 0);

/// Closed eye-shaped curve with two corners; the (pi, 2pi] half is the mirror
/// image of the (0, pi] branch across the plane x1 = 0. Tangents at the two
/// junction nodes are one-sided (taken from the branch owning the node).
FilamentState init_eye(const Grid& grid, double b, double theta);

/// Trapezoidal arclength of one period, integral of |T| ds.
double perimeter(const FilamentState& state);

// Small helpers shared by diagnostics and drivers.
double min_x1(const FilamentState& state);
int argmin_x1(const FilamentState& state);
double max_x1(const FilamentState& state);
double mean_x2(const FilamentState& state);

} // namespace vfp
