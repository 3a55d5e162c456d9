#pragma once

#include <vector>

#include "vfpair/geometry.hpp"
#include "vfpair/vec3.hpp"

namespace vfp {

/// Samples of the self-similar profile G(eta) and its derivative.
struct SelfSimilarProfile {
    std::vector<double> etas;
    std::vector<Vec3> G;
    std::vector<Vec3> G_prime;
    ModelParams params; // r_c forced to zero
    double tol = 0.0;
};

/// Integrate the profile ODE
///   G'' = |G'| (1/2) G x G' + eps |G'|^2 / G1 * e1 + eps G' (1/eta - 2 G1'/G1)
/// from (G0, G0') at eta_start to eta_end with an adaptive embedded RKF,
/// storing samples on a uniform request grid. Throws ProfileBlowup when G1
/// vanishes (eps > 0) or the state goes non-finite; the message carries the
/// last valid eta.
SelfSimilarProfile selfsim_integrate(const Vec3& G0, const Vec3& G0_prime, double eta_start,
                                     double eta_end, const ModelParams& params, double tol,
                                     int n_samples = 2001);

/// Max-norm residual of the pre-reduction form
///   (1/2)G - (eta/2)G' = G' x G'' / |G'|^3 - (eps/G1) (G' x e1)/|G'|
/// evaluated with 8th-order numerical differentiation of the stored samples;
/// an independent check of the algebraic reduction. Zero-length profiles
/// return 0 by convention.
double selfsim_residual(const SelfSimilarProfile& profile);

} // namespace vfp
