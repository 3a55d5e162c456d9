#pragma once

#include <vector>

#include "vfpair/geometry.hpp"
#include "vfpair/vec3.hpp"

namespace vfp {

/// Rates of the coupled X/T evolution system.
struct RhsOutput {
    std::vector<Vec3> dX_dt;
    std::vector<Vec3> dT_dt;

    void resize(std::size_t n) { dX_dt.resize(n); dT_dt.resize(n); }
};

/// Scratch buffers so repeated right-hand-side evaluations do not allocate.
struct RhsWorkspace {
    std::vector<Vec3> T_s;
    std::vector<Vec3> T_ss;

    void resize(std::size_t n) { T_s.resize(n); T_ss.resize(n); }
};

/// Full right-hand side of the coupled system:
///   dX/dt = T x T_s / |T|^3 - eps*x1/(x1^2+rc^2) * (T x e1)/|T|
///   dT/dt = its exact s-derivative, with d|T|/ds taken from the closed-form
///           modulus law rather than differenced.
void rhs_full(const FilamentState& state, const ModelParams& params,
              RhsOutput& out, RhsWorkspace& ws);
RhsOutput rhs_full(const FilamentState& state, const ModelParams& params);

/// Tangent-modulus law |T| = L0 * (x1^2 + rc^2)^(-eps/2).
double tangent_modulus(double x1, double L0, const ModelParams& params);

/// Rescale every tangent to the modulus law, keeping its direction.
void renormalize_tangents(FilamentState& state, const ModelParams& params);
FilamentState renormalized_tangents(const FilamentState& state, const ModelParams& params);

/// Reduced two-component model of the nearly-parallel pair.
struct ReducedState {
    std::vector<double> x;
    std::vector<double> y;
};

/// Rates of the reduced model:
///   x_t = -y_ss,   y_t = x_ss - eps*x/(x^2+rc^2)
/// with stencil second derivatives on a periodic grid of spacing h.
ReducedState rhs_km(const ReducedState& state, const ModelParams& params, double h);

} // namespace vfp
