#include "vfpair/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vfpair/errors.hpp"

namespace vfp {

const ButcherTableau& ButcherTableau::rkf45() {
    static const ButcherTableau tb = [] {
        ButcherTableau t;
        t.alpha = {0.0, 2.0 / 9.0, 1.0 / 3.0, 3.0 / 4.0, 1.0, 5.0 / 6.0};
        t.beta[1][0] = 2.0 / 9.0;
        t.beta[2][0] = 1.0 / 12.0;
        t.beta[2][1] = 1.0 / 4.0;
        t.beta[3][0] = 69.0 / 128.0;
        t.beta[3][1] = -243.0 / 128.0;
        t.beta[3][2] = 135.0 / 64.0;
        t.beta[4][0] = -17.0 / 12.0;
        t.beta[4][1] = 27.0 / 4.0;
        t.beta[4][2] = -27.0 / 5.0;
        t.beta[4][3] = 16.0 / 15.0;
        t.beta[5][0] = 65.0 / 432.0;
        t.beta[5][1] = -5.0 / 16.0;
        t.beta[5][2] = 13.0 / 16.0;
        t.beta[5][3] = 4.0 / 27.0;
        t.beta[5][4] = 5.0 / 144.0;
        t.c = {1.0 / 9.0, 0.0, 9.0 / 20.0, 16.0 / 45.0, 1.0 / 12.0, 0.0};
        t.c_hat = {47.0 / 450.0, 0.0, 12.0 / 25.0, 32.0 / 225.0, 1.0 / 30.0, 6.0 / 25.0};
        return t;
    }();
    return tb;
}

void IntegratorConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw Error(ErrorCode::invalid_params, "tolerances must be positive");
    if (!(tau_min <= tau_init && tau_init <= tau_max))
        throw Error(ErrorCode::invalid_params, "need tau_min <= tau_init <= tau_max");
    if (!(safety > 0.0 && safety < 1.0))
        throw Error(ErrorCode::invalid_params, "safety factor must be in (0, 1)");
    if (max_steps <= 0) throw Error(ErrorCode::invalid_params, "max_steps must be positive");
}

RkfStepper::RkfStepper(std::size_t n) : n_(n) {
    for (auto& q : q_) q.resize(n);
    stage_.X.resize(n);
    stage_.T.resize(n);
    ws_.resize(n);
}

namespace {
// Vec3 is three contiguous doubles; the stage combinations run as flat
// axpy passes so the compiler can vectorize them.
inline void flat_axpy(double a, const std::vector<Vec3>& x, std::vector<Vec3>& y) {
    const double* xs = &x[0].x;
    double* ys = &y[0].x;
    const std::size_t m = 3 * x.size();
    for (std::size_t i = 0; i < m; ++i) ys[i] += a * xs[i];
}
} // namespace

StepResult RkfStepper::step(const FilamentState& state, const ModelParams& params,
                            double tau, const IntegratorConfig& config) {
    const ButcherTableau& tb = ButcherTableau::rkf45();
    const std::size_t n = state.size();
    if (n != n_) throw Error(ErrorCode::invalid_params, "stepper sized for a different grid");

    StepResult res;
    res.tau_used = tau;

    stage_.grid = state.grid;
    stage_.L0 = state.L0;
    stage_.L0_prime = state.L0_prime;
    stage_.period_offset = state.period_offset;

    for (int i = 0; i < ButcherTableau::stages; ++i) {
        const FilamentState* src = &state;
        if (i > 0) {
            stage_.X = state.X;
            stage_.T = state.T;
            for (int l = 0; l < i; ++l) {
                const double w = tau * tb.beta[i][l];
                if (w == 0.0) continue;
                flat_axpy(w, q_[l].dX_dt, stage_.X);
                flat_axpy(w, q_[l].dT_dt, stage_.T);
            }
            stage_.time = state.time + tb.alpha[i] * tau;
            src = &stage_;
        }
        try {
            rhs_full(*src, params, q_[i], ws_);
        } catch (const Error& e) {
            if (i == 0) throw; // a defect of the base state, not of the step size
            res.blowup = true;
            res.error_estimate = std::numeric_limits<double>::infinity();
            res.accepted = false;
            return res;
        }
    }

    res.state.grid = state.grid;
    res.state.L0 = state.L0;
    res.state.L0_prime = state.L0_prime;
    res.state.period_offset = state.period_offset;
    res.state.time = state.time + tau;
    res.state.X = state.X;
    res.state.T = state.T;

    // 4th-order combination propagates; the difference against the embedded
    // 5th-order row feeds the mixed abs/rel weighted RMS estimate.
    stage_.X.assign(n, Vec3{});
    stage_.T.assign(n, Vec3{});
    for (int i = 0; i < ButcherTableau::stages; ++i) {
        const double wc = tau * tb.c[i];
        const double wd = tau * (tb.c[i] - tb.c_hat[i]);
        if (wc != 0.0) {
            flat_axpy(wc, q_[i].dX_dt, res.state.X);
            flat_axpy(wc, q_[i].dT_dt, res.state.T);
        }
        if (wd != 0.0) {
            flat_axpy(wd, q_[i].dX_dt, stage_.X);
            flat_axpy(wd, q_[i].dT_dt, stage_.T);
        }
    }

    double err_acc = 0.0;
    const double atol = config.abs_tol;
    const double rtol = config.rel_tol;
    auto weighted = [&](double diff, double ref) {
        const double w = atol + rtol * std::abs(ref);
        const double r = diff / w;
        return r * r;
    };
    for (std::size_t j = 0; j < n; ++j) {
        err_acc += weighted(stage_.X[j].x, state.X[j].x) + weighted(stage_.X[j].y, state.X[j].y) +
                   weighted(stage_.X[j].z, state.X[j].z);
        err_acc += weighted(stage_.T[j].x, state.T[j].x) + weighted(stage_.T[j].y, state.T[j].y) +
                   weighted(stage_.T[j].z, state.T[j].z);
    }
    const double est = std::sqrt(err_acc / (6.0 * static_cast<double>(n)));
    res.error_estimate = est;
    if (!std::isfinite(est)) {
        res.blowup = true;
        res.accepted = false;
        return res;
    }

    // Tangent-modulus correction; record the relative drift on both sides.
    double drift_pre = 0.0;
    double drift_post = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double target = tangent_modulus(res.state.X[j].x, state.L0[j], params);
        const double tn = norm(res.state.T[j]);
        if (!(tn > 0.0)) {
            res.blowup = true;
            res.accepted = false;
            return res;
        }
        drift_pre = std::max(drift_pre, std::abs(tn - target) / target);
        res.state.T[j] *= target / tn;
        drift_post = std::max(drift_post, std::abs(norm(res.state.T[j]) - target) / target);
    }
    res.modulus_drift_pre = drift_pre;
    res.modulus_drift_post = drift_post;
    res.accepted = est <= 1.0;
    return res;
}

StepResult rkf_step(const FilamentState& state, const ModelParams& params,
                    double tau, const IntegratorConfig& config) {
    RkfStepper stepper(state.size());
    StepResult res = stepper.step(state, params, tau, config);
    if (res.blowup)
        throw Error(ErrorCode::stage_blowup,
                    "non-finite stage at tau = " + std::to_string(tau) +
                        "; step size too large near close approach");
    return res;
}

double adapt(double error_estimate, double tau, const IntegratorConfig& config,
             double guard_cap) {
    double nt;
    if (error_estimate <= 0.0) {
        nt = config.tau_max;
    } else {
        nt = config.safety * tau * std::pow(error_estimate, -0.2);
        nt = std::min(nt, 5.0 * tau);
        nt = std::min(nt, config.tau_max);
    }
    nt = std::max(nt, config.tau_min);
    return std::min(nt, guard_cap);
}

double stability_max_tau(double h, const ModelParams& params, double x1_min) {
    if (!(h > 0.0)) throw Error(ErrorCode::invalid_params, "h must be positive");
    double term = 0.0;
    if (params.epsilon > 0.0) {
        const double rc2 = params.r_c * params.r_c;
        const double x2 = x1_min * x1_min;
        const double d = rc2 + x2;
        if (!(d > 0.0))
            throw Error(ErrorCode::degenerate_stretch, "r_c = x1 = 0 with eps > 0");
        term = params.epsilon * h * h * (rc2 - x2) / (d * d);
    }
    const double arg = std::max(4.0 + term, 1e-12);
    return h * h / std::sqrt(arg);
}

ReducedState km_semi_implicit_step(const ReducedState& state, const ModelParams& params,
                                   double tau, double h) {
    const std::size_t n = state.x.size();
    if (state.y.size() != n)
        throw Error(ErrorCode::invalid_params, "reduced state components differ in length");
    const double lam = tau / (h * h);
    const double rc2 = params.r_c * params.r_c;
    ReducedState out;
    out.x.resize(n);
    out.y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1) % n;
        const std::size_t jm = (j + n - 1) % n;
        out.x[j] = state.x[j] - lam * (state.y[jp] - 2.0 * state.y[j] + state.y[jm]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1) % n;
        const std::size_t jm = (j + n - 1) % n;
        double v = state.y[j] + lam * (out.x[jp] - 2.0 * out.x[j] + out.x[jm]);
        if (params.epsilon > 0.0)
            v -= params.epsilon * tau * out.x[j] / (out.x[j] * out.x[j] + rc2);
        out.y[j] = v;
    }
    return out;
}

namespace {

std::vector<double> build_events(double t0, const RunOptions& opts) {
    std::vector<double> ev;
    if (opts.sample_dt > 0.0) {
        const long k0 = static_cast<long>(std::floor(t0 / opts.sample_dt)) + 1;
        for (long k = k0; k * opts.sample_dt <= opts.t_end + 1e-15; ++k) {
            const double t = k * opts.sample_dt;
            if (t > t0 + 1e-15) ev.push_back(t);
        }
    }
    for (double t : opts.snapshot_times)
        if (t > t0 + 1e-15 && t <= opts.t_end + 1e-15) ev.push_back(t);
    ev.push_back(opts.t_end);
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-13; }),
             ev.end());
    return ev;
}

bool is_snapshot_time(double t, const RunOptions& opts) {
    for (double s : opts.snapshot_times)
        if (std::abs(s - t) < 1e-12) return true;
    return false;
}

bool is_sample_time(double t, const RunOptions& opts) {
    if (opts.sample_dt <= 0.0) return false;
    const double k = t / opts.sample_dt;
    return std::abs(k - std::round(k)) < 1e-9;
}

} // namespace

RunResult run(FilamentState state, const ModelParams& params,
              const IntegratorConfig& config, const RunOptions& options) {
    config.validate();
    RunResult out;
    if (options.t_end <= state.time) {
        out.state = std::move(state);
        return out;
    }

    RkfStepper stepper(state.size());
    const double h = state.grid.spacing();
    std::vector<double> events = build_events(state.time, options);
    std::size_t next_event = 0;

    if (options.on_sample && options.sample_dt > 0.0) options.on_sample(state);

    double tau = std::clamp(config.tau_init, config.tau_min, config.tau_max);
    out.tau_final = tau;

    for (long step_count = 0;; ++step_count) {
        if (state.time >= options.t_end - 1e-13) break;
        if (step_count >= config.max_steps) {
            out.status = RunStatus::max_steps_exceeded;
            out.message = "max_steps exceeded at t = " + std::to_string(state.time);
            break;
        }

        double cap = std::numeric_limits<double>::infinity();
        if (config.stability_guard)
            cap = stability_max_tau(h, params, std::max(0.0, min_x1(state)));

        double tau_exec = std::min(tau, cap);
        const double to_event = events[next_event] - state.time;
        tau_exec = std::min(tau_exec, to_event);
        tau_exec = std::max(tau_exec, 0.0);

        StepResult res = stepper.step(state, params, tau_exec, config);

        if (res.blowup) {
            ++out.rejections;
            if (tau_exec <= config.tau_min * (1.0 + 1e-12)) {
                out.status = RunStatus::stage_blowup;
                out.message = "non-finite stage at minimal step, t = " + std::to_string(state.time);
                break;
            }
            tau = std::max(tau_exec * 0.5, config.tau_min);
            continue;
        }
        if (!res.accepted) {
            ++out.rejections;
            if (tau_exec <= config.tau_min * (1.0 + 1e-12)) {
                out.status = RunStatus::step_underflow;
                out.message = "persistent rejection at tau_min, t = " + std::to_string(state.time);
                break;
            }
            tau = adapt(res.error_estimate, tau_exec, config, cap);
            continue;
        }

        state = std::move(res.state);
        ++out.steps;
        out.max_modulus_drift_pre = std::max(out.max_modulus_drift_pre, res.modulus_drift_pre);
        out.max_modulus_drift_post = std::max(out.max_modulus_drift_post, res.modulus_drift_post);
        out.min_tau_accepted = std::min(out.min_tau_accepted, tau_exec);
        out.max_tau_accepted = std::max(out.max_tau_accepted, tau_exec);

        // The controller value for the next step is fixed before any
        // checkpoint is written so a restart resumes bit-identically.
        tau = adapt(res.error_estimate, tau_exec, config, cap);
        out.tau_final = tau;

        // Snap onto the event time we aimed at to keep sample times exact.
        if (std::abs(state.time - events[next_event]) < 1e-12) {
            state.time = events[next_event];
            const double t = state.time;
            if (options.on_sample && is_sample_time(t, options)) options.on_sample(state);
            if (options.on_snapshot && is_snapshot_time(t, options)) options.on_snapshot(state, tau);
            ++next_event;
        }
        if (options.on_step) options.on_step(state, res);
    }

    out.state = std::move(state);
    return out;
}

} // namespace vfp
