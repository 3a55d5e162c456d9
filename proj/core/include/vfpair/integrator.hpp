#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "vfpair/dynamics.hpp"
#include "vfpair/geometry.hpp"

namespace vfp {

/// Embedded Runge-Kutta-Fehlberg 4(5) tableau, six stages. The c row is the
/// 4th-order method that propagates the solution; c_hat is the embedded
/// 5th-order row used for the error estimate.
struct ButcherTableau {
    static constexpr int stages = 6;
    std::array<double, 6> alpha{};
    std::array<std::array<double, 6>, 6> beta{};
    std::array<double, 6> c{};
    std::array<double, 6> c_hat{};

    static const ButcherTableau& rkf45();
};

struct IntegratorConfig {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    double tau_init = 1e-6;
    double tau_min = 1e-14;
    double tau_max = 1e-2;
    double safety = 0.9;
    bool stability_guard = true;
    long max_steps = 50'000'000;

    void validate() const;
};

/// Outcome of one attempted step. error_estimate is the mixed abs/rel
/// weighted RMS of the difference between the two embedded solutions, scaled
/// so that values <= 1 are acceptable.
struct StepResult {
    FilamentState state;
    double tau_used = 0.0;
    double error_estimate = 0.0;
    bool accepted = false;
    bool blowup = false;
    /// max_j relative deviation of |T_j| from the modulus law before/after
    /// the per-step tangent correction.
    double modulus_drift_pre = 0.0;
    double modulus_drift_post = 0.0;
};

/// Reusable stepper: owns all stage buffers so stepping never allocates.
class RkfStepper {
public:
    explicit RkfStepper(std::size_t n);

    /// One embedded step of size tau from `state`. The returned state is the
    /// 4th-order solution passed through the tangent-modulus correction.
    /// Never throws on stage blowup; inspect StepResult::blowup instead.
    StepResult step(const FilamentState& state, const ModelParams& params,
                    double tau, const IntegratorConfig& config);

private:
    std::size_t n_;
    std::array<RhsOutput, ButcherTableau::stages> q_;
    FilamentState stage_;
    RhsWorkspace ws_;
};

/// Spec-facing wrapper around RkfStepper: throws StageBlowup when a stage
/// goes non-finite.
StepResult rkf_step(const FilamentState& state, const ModelParams& params,
                    double tau, const IntegratorConfig& config);

/// Fifth-root step controller. error_estimate is in units of the acceptance
/// threshold (accept iff <= 1). Growth is limited to 5x per step; the result
/// is clamped to [tau_min, tau_max] and to guard_cap.
double adapt(double error_estimate, double tau, const IntegratorConfig& config,
             double guard_cap = std::numeric_limits<double>::infinity());

/// Largest stable time step of the semi-implicit reference scheme at the
/// worst discrete mode, evaluated at the given minimum |x1|:
///   h^2 / sqrt(4 + eps*h^2*(rc^2 - x1^2)/(rc^2 + x1^2)^2).
double stability_max_tau(double h, const ModelParams& params, double x1_min);

/// One step of the semi-implicit reference scheme for the reduced model:
/// x explicitly from y's second difference, then y from the *new* x.
ReducedState km_semi_implicit_step(const ReducedState& state, const ModelParams& params,
                                   double tau, double h);

enum class RunStatus { ok, step_underflow, stage_blowup, max_steps_exceeded };

struct RunOptions {
    double t_end = 0.0;
    double sample_dt = 0.0;                 // 0 disables uniform sampling
    std::vector<double> snapshot_times;
    std::function<void(const FilamentState&)> on_sample;
    std::function<void(const FilamentState&, double /*tau*/)> on_snapshot;
    std::function<void(const FilamentState&, const StepResult&)> on_step;
};

struct RunResult {
    FilamentState state;
    RunStatus status = RunStatus::ok;
    std::string message;
    long steps = 0;
    long rejections = 0;
    double tau_final = 0.0;
    double max_modulus_drift_pre = 0.0;
    double max_modulus_drift_post = 0.0;
    double min_tau_accepted = std::numeric_limits<double>::infinity();
    double max_tau_accepted = 0.0;
};

/// Advance the state to t_end with adaptive embedded stepping. Diagnostic
/// callbacks fire at every accepted step; samples and snapshots land on
/// exact times (the step is capped at event boundaries). On failure the
/// last accepted state is returned with the corresponding status.
RunResult run(FilamentState state, const ModelParams& params,
              const IntegratorConfig& config, const RunOptions& options);

/// Small fixed-size embedded step sharing the same tableau; used by the
/// profile integrator and by order-verification tests.
template <std::size_t N, class Rhs>
struct SmallStep {
    std::array<double, N> y4{};
    std::array<double, N> y5{};
};

template <std::size_t N, class Rhs>
SmallStep<N, Rhs> rkf45_small_step(Rhs&& f, double t, const std::array<double, N>& y, double tau) {
    const ButcherTableau& tb = ButcherTableau::rkf45();
    std::array<std::array<double, N>, ButcherTableau::stages> q{};
    std::array<double, N> ys{};
    for (int i = 0; i < ButcherTableau::stages; ++i) {
        ys = y;
        for (int l = 0; l < i; ++l) {
            const double w = tau * tb.beta[i][l];
            if (w != 0.0)
                for (std::size_t k = 0; k < N; ++k) ys[k] += w * q[l][k];
        }
        q[i] = f(t + tb.alpha[i] * tau, ys);
    }
    SmallStep<N, Rhs> out;
    out.y4 = y;
    out.y5 = y;
    for (int i = 0; i < ButcherTableau::stages; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            out.y4[k] += tau * tb.c[i] * q[i][k];
            out.y5[k] += tau * tb.c_hat[i] * q[i][k];
        }
    return out;
}

} // namespace vfp
