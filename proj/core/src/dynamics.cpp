#include "vfpair/dynamics.hpp"

#include <cmath>
#include <string>

#include "vfpair/errors.hpp"
#include "vfpair/stencil.hpp"

namespace vfp {

namespace {
constexpr double kZeroTangentFloor = 1e-150;

void check_finite(const FilamentState& state) {
    double acc = 0.0;
    for (std::size_t j = 0; j < state.size(); ++j) {
        acc += state.X[j].x + state.X[j].y + state.X[j].z;
        acc += state.T[j].x + state.T[j].y + state.T[j].z;
    }
    if (!std::isfinite(acc))
        throw Error(ErrorCode::non_finite_state, "state contains non-finite entries");
}
} // namespace

void rhs_full(const FilamentState& state, const ModelParams& params,
              RhsOutput& out, RhsWorkspace& ws) {
    const std::size_t n = state.size();
    check_finite(state);
    out.resize(n);
    ws.resize(n);

    const double h = state.grid.spacing();
    const DiffOperator d1 = DiffOperator::first(h);
    const DiffOperator d2 = DiffOperator::second(h);
    d1.apply(state.T.data(), ws.T_s.data(), n);
    d2.apply(state.T.data(), ws.T_ss.data(), n);

    const double eps = params.epsilon;
    const double rc2 = params.r_c * params.r_c;

    for (std::size_t j = 0; j < n; ++j) {
        const Vec3& T = state.T[j];
        const double tn2 = norm2(T);
        if (!(tn2 > kZeroTangentFloor))
            throw Error(ErrorCode::zero_tangent, "|T| underflow at node " + std::to_string(j));
        const double tn = std::sqrt(tn2);
        const double inv_tn3 = 1.0 / (tn2 * tn);

        const Vec3 t_cross_ts = cross(T, ws.T_s[j]);
        Vec3 dX = t_cross_ts * inv_tn3;
        Vec3 dT = cross(T, ws.T_ss[j]) * inv_tn3;

        // d|T|/ds from the closed-form modulus law, never differenced.
        const double x1 = state.X[j].x;
        const double denom = x1 * x1 + rc2;
        double mod_s = state.L0_prime[j] / state.L0[j];
        if (eps > 0.0) {
            if (!(denom > 0.0))
                throw Error(ErrorCode::degenerate_stretch,
                            "x1 = r_c = 0 with eps > 0 at node " + std::to_string(j));
            mod_s -= eps * x1 * T.x / denom;
        }
        mod_s *= tn;

        dT -= t_cross_ts * (3.0 * mod_s / (tn2 * tn2));

        if (eps > 0.0) {
            const Vec3 t_cross_e1{0.0, T.z, -T.y};
            const Vec3 ts_cross_e1{0.0, ws.T_s[j].z, -ws.T_s[j].y};
            dX -= t_cross_e1 * (eps * x1 / (denom * tn));
            const double coef = T.x * (rc2 - x1 * x1) / denom - x1 * mod_s / tn;
            dT -= (ts_cross_e1 * x1 + t_cross_e1 * coef) * (eps / (denom * tn));
        }

        out.dX_dt[j] = dX;
        out.dT_dt[j] = dT;
    }
}

RhsOutput rhs_full(const FilamentState& state, const ModelParams& params) {
    RhsOutput out;
    RhsWorkspace ws;
    rhs_full(state, params, out, ws);
    return out;
}

double tangent_modulus(double x1, double L0, const ModelParams& params) {
    const double d = x1 * x1 + params.r_c * params.r_c;
    if (params.epsilon == 0.0) return L0;
    if (!(d > 0.0))
        throw Error(ErrorCode::degenerate_stretch,
                    "x1 = r_c = 0 with eps > 0: singular stretch");
    return L0 * std::pow(d, -0.5 * params.epsilon);
}

void renormalize_tangents(FilamentState& state, const ModelParams& params) {
    const std::size_t n = state.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double tn = norm(state.T[j]);
        if (!(tn > kZeroTangentFloor))
            throw Error(ErrorCode::zero_tangent, "|T| underflow at node " + std::to_string(j));
        const double target = tangent_modulus(state.X[j].x, state.L0[j], params);
        state.T[j] *= target / tn;
    }
}

FilamentState renormalized_tangents(const FilamentState& state, const ModelParams& params) {
    FilamentState out = state;
    renormalize_tangents(out, params);
    return out;
}

ReducedState rhs_km(const ReducedState& state, const ModelParams& params, double h) {
    const std::size_t n = state.x.size();
    if (state.y.size() != n)
        throw Error(ErrorCode::invalid_params, "reduced state components differ in length");
    ReducedState rates;
    rates.x = differentiate(state.y, 2, h);
    rates.y = differentiate(state.x, 2, h);
    const double rc2 = params.r_c * params.r_c;
    for (std::size_t j = 0; j < n; ++j) {
        rates.x[j] = -rates.x[j];
        if (params.epsilon > 0.0)
            rates.y[j] -= params.epsilon * state.x[j] / (state.x[j] * state.x[j] + rc2);
    }
    return rates;
}

} // namespace vfp
