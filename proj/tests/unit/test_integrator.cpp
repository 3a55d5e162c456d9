#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "vfpair/analysis.hpp"
#include "vfpair/errors.hpp"
#include "vfpair/integrator.hpp"

using namespace vfp;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::array<double, 1> decay_rhs(double, const std::array<double, 1>& y) { return {-y[0]}; }

FilamentState unit_circle_23(int n) {
    FilamentState st;
    st.grid = Grid::make(n, kTwoPi);
    st.X.resize(n);
    st.T.resize(n);
    st.L0.assign(n, 1.0);
    st.L0_prime.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double s = st.grid.param(j);
        st.X[j] = {0.0, std::cos(s), std::sin(s)};
        st.T[j] = {0.0, -std::sin(s), std::cos(s)};
    }
    return st;
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    return fit_linear(x, y).slope;
}
} // namespace

TEST_SUITE("integrator") {

TEST_CASE("tableau matches the published coefficients and is consistent") {
    const auto& tb = ButcherTableau::rkf45();
    CHECK(tb.alpha[1] == 2.0 / 9.0);
    CHECK(tb.alpha[2] == 1.0 / 3.0);
    CHECK(tb.alpha[3] == 3.0 / 4.0);
    CHECK(tb.alpha[4] == 1.0);
    CHECK(tb.alpha[5] == 5.0 / 6.0);
    CHECK(tb.beta[3][0] == 69.0 / 128.0);
    CHECK(tb.beta[5][4] == 5.0 / 144.0);
    CHECK(tb.c[0] == 1.0 / 9.0);
    CHECK(tb.c[2] == 9.0 / 20.0);
    CHECK(tb.c[3] == 16.0 / 45.0);
    CHECK(tb.c[4] == 1.0 / 12.0);
    CHECK(tb.c_hat[0] == 47.0 / 450.0);
    CHECK(tb.c_hat[2] == 12.0 / 25.0);
    CHECK(tb.c_hat[3] == 32.0 / 225.0);
    CHECK(tb.c_hat[4] == 1.0 / 30.0);

    for (int i = 1; i < ButcherTableau::stages; ++i) {
        double row = 0.0;
        for (int l = 0; l < i; ++l) row += tb.beta[i][l];
        CHECK(row == doctest::Approx(tb.alpha[i]).epsilon(1e-15));
    }
    double sc = 0.0, sch = 0.0;
    for (int i = 0; i < ButcherTableau::stages; ++i) {
        sc += tb.c[i];
        sch += tb.c_hat[i];
    }
    CHECK(sc == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sch == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zero dynamics leaves the state unchanged with zero estimate") {
    auto zero = [](double, const std::array<double, 1>& ) { return std::array<double, 1>{0.0}; };
    const auto st = rkf45_small_step<1>(zero, 0.0, {1.25}, 0.3);
    CHECK(st.y4[0] == 1.25);
    CHECK(st.y5[0] == 1.25);
}

TEST_CASE("exponential decay accuracy of both embedded rows") {
    const auto st = rkf45_small_step<1>(decay_rhs, 0.0, {1.0}, 0.1);
    const double exact = std::exp(-0.1);
    // the propagated row is the 4th-order one; its leading error is tau^5/480
    CHECK(std::abs(st.y4[0] - exact) <= 2.5e-8);
    CHECK(std::abs(st.y4[0] - exact) >= 1.2e-8);
    CHECK(std::abs(st.y5[0] - exact) <= 5e-9);
}

TEST_CASE("local order slopes are at least 4.7") {
    std::vector<double> lt, le4, lest;
    for (double tau : {0.2, 0.1, 0.05, 0.025}) {
        const auto st = rkf45_small_step<1>(decay_rhs, 0.0, {1.0}, tau);
        lt.push_back(std::log(tau));
        le4.push_back(std::log(std::abs(st.y4[0] - std::exp(-tau))));
        lest.push_back(std::log(std::abs(st.y4[0] - st.y5[0])));
    }
    CHECK(linear_slope(lt, le4) >= 4.7);
    CHECK(linear_slope(lt, lest) >= 4.7);
}

TEST_CASE("halving tau cuts the filament error estimate about 2^5") {
    ModelParams p{0.05, 0.05, 0.2, 0.01};
    const auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    IntegratorConfig cfg;
    RkfStepper stepper(st.size());
    bool checked = false;
    for (double tau : {4e-3, 2e-3, 1e-3, 5e-4}) {
        const auto r1 = stepper.step(st, p, tau, cfg);
        const auto r2 = stepper.step(st, p, tau / 2.0, cfg);
        if (r2.error_estimate > 1e-11 && r1.error_estimate < 1e3 && !r1.blowup && !r2.blowup) {
            const double ratio = r1.error_estimate / r2.error_estimate;
            CHECK(ratio >= 22.0);
            CHECK(ratio <= 42.0);
            checked = true;
            break;
        }
    }
    CHECK(checked);
}

TEST_CASE("controller fixed points and clamps") {
    IntegratorConfig cfg;
    cfg.safety = 0.9;
    cfg.tau_min = 1e-12;
    cfg.tau_max = 1.0;
    CHECK(adapt(1.0, 0.01, cfg) == doctest::Approx(0.009).epsilon(1e-14));
    CHECK(adapt(32.0, 0.01, cfg) == doctest::Approx(0.0045).epsilon(1e-14));
    CHECK(adapt(0.0, 0.01, cfg, 0.37) == 0.37);
    CHECK(adapt(0.0, 0.01, cfg) == 1.0);
    CHECK(adapt(1e-10, 0.01, cfg) == doctest::Approx(0.05).epsilon(1e-14)); // 5x growth cap
    CHECK(adapt(1.0, 0.01, cfg, 0.005) == 0.005);
}

TEST_CASE("stability bound values") {
    ModelParams lia{0.0, 0.0, 0.0, 0.0};
    CHECK(stability_max_tau(0.1, lia, 0.0) == doctest::Approx(0.005).epsilon(1e-14));

    ModelParams p{0.05, 5e-3, 0.11, 0.0};
    const double h = kTwoPi / 6000.0;
    CHECK(stability_max_tau(h, p, 0.0) == doctest::Approx(5.4815e-7).epsilon(1e-3));

    // deep-regularization regime: halving r_c halves the bound
    ModelParams deep{0.5, 1e-3, 0.11, 0.0};
    ModelParams deep2{0.5, 5e-4, 0.11, 0.0};
    const double ratio = stability_max_tau(1.0, deep, 0.0) / stability_max_tau(1.0, deep2, 0.0);
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("semi-implicit scheme: fixed point, bounded and growing modes") {
    const int n = 64;
    const double h = 1.0;
    ModelParams p{0.5, 1.0, 0.0, 0.0};

    ReducedState zero;
    zero.x.assign(n, 0.0);
    zero.y.assign(n, 0.0);
    const auto z1 = km_semi_implicit_step(zero, ModelParams{0.0, 1.0, 0.0, 0.0}, 0.7, h);
    for (int j = 0; j < n; ++j) {
        CHECK(z1.x[j] == 0.0);
        CHECK(z1.y[j] == 0.0);
    }

    // y update must use the *new* x: compare one step against the closed form
    // on a state where old and new x differ.
    {
        ReducedState s;
        s.x.assign(n, 0.0);
        s.y.assign(n, 0.0);
        s.y[10] = 1.0;
        const double tau = 0.3;
        const double lam = tau / (h * h);
        const auto r = km_semi_implicit_step(s, p, tau, h);
        std::vector<double> xn(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const int jp = (j + 1) % n, jm = (j + n - 1) % n;
            xn[j] = -lam * (s.y[jp] - 2.0 * s.y[j] + s.y[jm]);
        }
        for (int j = 0; j < n; ++j) {
            const int jp = (j + 1) % n, jm = (j + n - 1) % n;
            const double expect = s.y[j] + lam * (xn[jp] - 2.0 * xn[j] + xn[jm]) -
                                  p.epsilon * tau * xn[j] / (xn[j] * xn[j] + 1.0);
            CHECK(r.y[j] == doctest::Approx(expect).epsilon(1e-15));
            CHECK(r.x[j] == doctest::Approx(xn[j]).epsilon(1e-15));
        }
    }

    const int mode = 5;
    const double omega = kTwoPi * mode / n;
    const double zeta = 2.0 * (1.0 - std::cos(omega));
    auto mode_amp = [&](const ReducedState& s) {
        double px = 0.0, py = 0.0;
        for (int j = 0; j < n; ++j) {
            const double c = std::cos(omega * j);
            px += s.x[j] * c;
            py += s.y[j] * c;
        }
        return std::hypot(2.0 * px / n, 2.0 * py / n);
    };
    auto evolve = [&](double tau, int steps, double stop_at) {
        ReducedState s;
        s.x.assign(n, 0.0);
        s.y.assign(n, 0.0);
        const double d0 = 1e-8;
        for (int j = 0; j < n; ++j) s.y[j] = d0 * std::cos(omega * j);
        double worst = 0.0;
        for (int k = 0; k < steps; ++k) {
            s = km_semi_implicit_step(s, p, tau, h);
            worst = std::max(worst, mode_amp(s) / d0);
            if (worst > stop_at) break;
        }
        return worst;
    };

    // tau = 0.3 keeps every grid mode inside the stability region (the worst
    // mode has zeta = 4), so the seeded mode stays bounded over 10^4 steps.
    const double tau_s = 0.3;
    const double zeta_max = 4.0;
    const double a_worst = tau_s * zeta_max * (tau_s * zeta_max + 0.5 * tau_s);
    REQUIRE(a_worst < 4.0);
    CHECK(evolve(tau_s, 10'000, 1e9) < 50.0);

    // tau = 12 violates the resolved condition -> geometric growth
    const double lz = 12.0 * zeta;
    const double mu = 0.5 * 12.0;
    REQUIRE(lz > 0.5 * (-mu + std::sqrt(mu * mu + 16.0)) * 1.05);
    CHECK(evolve(12.0, 10'000, 1e3) >= 1e3);
}

TEST_CASE("run: unperturbed pair translates exactly") {
    ModelParams p{0.05, 0.025, 0.11, 0.0};
    auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    IntegratorConfig cfg;
    RunOptions opts;
    opts.t_end = 1.0;
    const auto res = run(st, p, cfg, opts);
    REQUIRE(res.status == RunStatus::ok);
    CHECK(res.state.time == doctest::Approx(1.0).epsilon(1e-14));
    const double v = -p.epsilon * p.b / (p.b * p.b + p.r_c * p.r_c);
    CHECK(std::abs(mean_x2(res.state) - v * 1.0) < 1e-9);
    CHECK(res.max_modulus_drift_pre < 1e-13); // example: drift vanishes for delta = 0
    CHECK(res.rejections == 0);
}

TEST_CASE("run: LIA circle translates along the binormal keeping its shape") {
    ModelParams p{0.0, 0.0, 0.0, 0.0};
    auto st = unit_circle_23(128);
    IntegratorConfig cfg;
    RunOptions opts;
    opts.t_end = 1.0;
    const auto res = run(st, p, cfg, opts);
    REQUIRE(res.status == RunStatus::ok);
    double worst = 0.0;
    for (int j = 0; j < 128; ++j) {
        const double s = res.state.grid.param(j);
        const Vec3 expect{1.0, std::cos(s), std::sin(s)};
        worst = std::max(worst, norm(res.state.X[j] - expect));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("run is deterministic") {
    ModelParams p{0.05, 0.05, 0.2, 0.01};
    const auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    IntegratorConfig cfg;
    RunOptions opts;
    opts.t_end = 0.02;
    const auto a = run(st, p, cfg, opts);
    const auto b = run(st, p, cfg, opts);
    REQUIRE(a.status == RunStatus::ok);
    CHECK(a.state.X == b.state.X);
    CHECK(a.state.T == b.state.T);
    CHECK(a.steps == b.steps);
}

TEST_CASE("guard: no accepted step exceeds the stability cap") {
    ModelParams p{0.05, 0.05, 0.2, 0.01};
    const auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    IntegratorConfig cfg;
    cfg.stability_guard = true;
    RunOptions opts;
    opts.t_end = 0.05;
    bool ok = true;
    const double h = st.grid.spacing();
    opts.on_step = [&](const FilamentState& s, const StepResult& r) {
        const double cap = stability_max_tau(h, p, std::max(0.0, min_x1(s)));
        if (r.tau_used > cap * (1.0 + 1e-6)) ok = false;
    };
    const auto res = run(st, p, cfg, opts);
    REQUIRE(res.status == RunStatus::ok);
    CHECK(ok);
}

TEST_CASE("persistent rejection bottoms out in StepUnderflow") {
    ModelParams p{0.05, 0.05, 0.2, 0.01};
    const auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    // the floor step is too coarse for the requested tolerance, so every
    // attempt is rejected and the run aborts with the last good state
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-14;
    cfg.rel_tol = 1e-14;
    cfg.tau_min = 1e-2;
    cfg.tau_init = 1e-2;
    cfg.tau_max = 1e-2;
    cfg.stability_guard = false;
    RunOptions opts;
    opts.t_end = 0.1;
    const auto res = run(st, p, cfg, opts);
    CHECK(res.status == RunStatus::step_underflow);
    CHECK(res.state.time < 0.1); // last good state is attached
}

TEST_CASE("rkf_step throws StageBlowup on a non-finite stage") {
    ModelParams p{0.05, 0.05, 0.2, 0.01};
    const auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    // an overflowing step makes the stage states non-finite
    IntegratorConfig cfg;
    CHECK_THROWS_WITH_AS((void)rkf_step(st, p, 1e300, cfg), doctest::Contains("StageBlowup"),
                         Error);
}

} // TEST_SUITE
