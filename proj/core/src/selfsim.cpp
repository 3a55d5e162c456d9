#include "vfpair/selfsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vfpair/errors.hpp"
#include "vfpair/integrator.hpp"
#include "vfpair/stencil.hpp"

namespace vfp {

namespace {

constexpr double kG1Floor = 1e-12;

std::array<double, 6> pack(const Vec3& g, const Vec3& gp) {
    return {g.x, g.y, g.z, gp.x, gp.y, gp.z};
}

Vec3 unpack_g(const std::array<double, 6>& y) { return {y[0], y[1], y[2]}; }
Vec3 unpack_gp(const std::array<double, 6>& y) { return {y[3], y[4], y[5]}; }

} // namespace

SelfSimilarProfile selfsim_integrate(const Vec3& G0, const Vec3& G0_prime, double eta_start,
                                     double eta_end, const ModelParams& params, double tol,
                                     int n_samples) {
    ModelParams p = params;
    p.r_c = 0.0; // self-similarity holds only in the vanishing-core limit
    if (p.epsilon < 0.0 || p.epsilon > 1.0)
        throw Error(ErrorCode::invalid_params, "epsilon must be in [0, 1]");
    if (p.epsilon > 0.0 && !(eta_start > 0.0))
        throw Error(ErrorCode::invalid_params, "eta_start must be positive when eps > 0");
    if (p.epsilon > 0.0 && std::abs(G0.x) < kG1Floor)
        throw Error(ErrorCode::invalid_params, "G1(eta_start) must be nonzero when eps > 0");
    if (!(norm(G0_prime) > 0.0))
        throw Error(ErrorCode::invalid_params, "|G'(eta_start)| must be positive");
    if (!(eta_end > eta_start))
        throw Error(ErrorCode::invalid_params, "eta_end must exceed eta_start");
    if (n_samples < 2) throw Error(ErrorCode::invalid_params, "need at least 2 samples");
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_params, "tol must be positive");

    const double eps = p.epsilon;
    auto rhs = [eps](double eta, const std::array<double, 6>& y) -> std::array<double, 6> {
        const Vec3 g = unpack_g(y);
        const Vec3 gp = unpack_gp(y);
        const double gn = norm(gp);
        Vec3 gpp = cross(g, gp) * (0.5 * gn);
        if (eps > 0.0) {
            gpp += Vec3{1.0, 0.0, 0.0} * (eps * gn * gn / g.x);
            gpp += gp * (eps * (1.0 / eta - 2.0 * gp.x / g.x));
        }
        return {gp.x, gp.y, gp.z, gpp.x, gpp.y, gpp.z};
    };

    SelfSimilarProfile out;
    out.params = p;
    out.tol = tol;
    out.etas.resize(n_samples);
    out.G.resize(n_samples);
    out.G_prime.resize(n_samples);
    const double ds = (eta_end - eta_start) / static_cast<double>(n_samples - 1);
    for (int i = 0; i < n_samples; ++i) out.etas[i] = eta_start + ds * i;
    out.G[0] = G0;
    out.G_prime[0] = G0_prime;

    std::array<double, 6> y = pack(G0, G0_prime);
    double eta = eta_start;
    double tau = std::min(1e-4, ds);
    int next_sample = 1;

    auto wrms = [&](const std::array<double, 6>& a, const std::array<double, 6>& b,
                    const std::array<double, 6>& ref) {
        double acc = 0.0;
        for (int k = 0; k < 6; ++k) {
            const double w = tol + tol * std::abs(ref[k]);
            const double r = (a[k] - b[k]) / w;
            acc += r * r;
        }
        return std::sqrt(acc / 6.0);
    };

    const double tau_min = 1e-14;
    long guard = 0;
    while (eta < eta_end - 1e-14) {
        if (++guard > 50'000'000)
            throw Error(ErrorCode::profile_blowup,
                        "step budget exhausted at eta = " + std::to_string(eta));
        const double target = out.etas[next_sample];
        double t_exec = std::min(tau, target - eta);
        auto st = rkf45_small_step<6>(rhs, eta, y, t_exec);
        double finite_acc = 0.0;
        for (int k = 0; k < 6; ++k) finite_acc += st.y4[k];
        if (!std::isfinite(finite_acc)) {
            if (t_exec <= tau_min)
                throw Error(ErrorCode::profile_blowup,
                            "profile diverged; last valid eta = " + std::to_string(eta));
            tau = std::max(0.5 * t_exec, tau_min);
            continue;
        }
        const double est = wrms(st.y4, st.y5, y);
        if (est > 1.0) {
            if (t_exec <= tau_min)
                throw Error(ErrorCode::profile_blowup,
                            "tolerance unreachable; last valid eta = " + std::to_string(eta));
            tau = std::max(0.9 * t_exec * std::pow(est, -0.2), tau_min);
            continue;
        }
        y = st.y4;
        eta += t_exec;
        if (eps > 0.0 && std::abs(y[0]) < kG1Floor)
            throw Error(ErrorCode::profile_blowup,
                        "G1 vanished; last valid eta = " + std::to_string(eta));
        if (std::abs(eta - target) < 1e-14) {
            eta = target;
            out.G[next_sample] = unpack_g(y);
            out.G_prime[next_sample] = unpack_gp(y);
            ++next_sample;
            if (next_sample >= n_samples) break;
        }
        const double grow = est > 0.0 ? 0.9 * std::pow(est, -0.2) : 5.0;
        tau = std::min(t_exec * std::min(grow, 5.0), eta_end - eta_start);
    }
    return out;
}

double selfsim_residual(const SelfSimilarProfile& profile) {
    const std::size_t n = profile.etas.size();
    if (n == 0) return 0.0;
    if (n < 9) return 0.0; // too short for the interior stencil; empty max
    const double d_eta = profile.etas[1] - profile.etas[0];
    const double eps = profile.params.epsilon;

    // Non-periodic interior application of the 8th-order first-derivative
    // stencil to the stored G' samples gives an independent G''.
    const DiffOperator d1 = DiffOperator::first(d_eta);
    double worst = 0.0;
    for (std::size_t j = 4; j + 4 < n; ++j) {
        Vec3 gpp{};
        for (int k = 0; k < 9; ++k) gpp += profile.G_prime[j + k - 4] * d1.weights[k];
        const Vec3 g = profile.G[j];
        const Vec3 gp = profile.G_prime[j];
        const double gn = norm(gp);
        Vec3 r = g * 0.5 - gp * (0.5 * profile.etas[j]) - cross(gp, gpp) / (gn * gn * gn);
        if (eps > 0.0) r += Vec3{0.0, gp.z, -gp.y} * (eps / (g.x * gn));
        worst = std::max(worst, norm(r));
    }
    return worst;
}

} // namespace vfp
