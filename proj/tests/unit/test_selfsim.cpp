#include <doctest.h>

#include <cmath>

#include "vfpair/errors.hpp"
#include "vfpair/selfsim.hpp"

using namespace vfp;

namespace {
ModelParams lia() { return {0.0, 0.0, 0.0, 0.0}; }
ModelParams interacting(double eps) { return {eps, 0.0, 0.0, 0.0}; }
} // namespace

TEST_SUITE("selfsim") {

TEST_CASE("eps=0: |G'| is conserved from the trivial start") {
    const double tol = 1e-10;
    const auto prof = selfsim_integrate({0, 0, 0}, {0, 0, 1}, 1e-3, 10.0, lia(), tol, 1001);
    for (const Vec3& gp : prof.G_prime)
        CHECK(std::abs(norm(gp) - 1.0) <= 10.0 * tol);
}

TEST_CASE("eps=0: curvature of the profile is constant") {
    const double tol = 1e-10;
    const Vec3 g0{1.0, 0.4, -0.2};
    Vec3 gp0{0.3, 0.9, 0.4};
    gp0 = gp0 / norm(gp0);
    const auto prof = selfsim_integrate(g0, gp0, 1e-3, 10.0, lia(), tol, 2001);

    auto curvature_at = [&](std::size_t i) {
        // G'' from the equation itself; curvature oracle |G' x G''|/|G'|^3
        const Vec3 gp = prof.G_prime[i];
        const Vec3 gpp = cross(prof.G[i], gp) * (0.5 * norm(gp));
        const double gn = norm(gp);
        return norm(cross(gp, gpp)) / (gn * gn * gn);
    };
    const double k0 = curvature_at(0);
    REQUIRE(k0 > 0.1);
    for (std::size_t i = 0; i < prof.etas.size(); i += 50)
        CHECK(std::abs(curvature_at(i) - k0) <= tol * std::max(1.0, k0) * 10.0);
}

TEST_CASE("eps=0: reversing G0' gives the pi-rotated profile") {
    // rotation by pi about e3 fixes G0 = (0,0,2) and flips G0' = (1,0,0)
    const double tol = 1e-11;
    const Vec3 g0{0.0, 0.0, 2.0};
    const Vec3 gp0{1.0, 0.0, 0.0};
    const auto a = selfsim_integrate(g0, gp0, 1e-3, 6.0, lia(), tol, 501);
    const auto b = selfsim_integrate(g0, -gp0, 1e-3, 6.0, lia(), tol, 501);
    for (std::size_t i = 0; i < a.etas.size(); ++i) {
        const Vec3 rotated{-a.G[i].x, -a.G[i].y, a.G[i].z};
        CHECK(norm(b.G[i] - rotated) < 1e-8);
    }
}

// The pre-reduction form carries the first integral G.G' = eta*|G'|^2 (its
// component along G'), which the profile equation preserves; residual checks
// therefore start from data on that manifold.
static Vec3 compatible_g0(const Vec3& g_perp, const Vec3& gp_unit, double eta0) {
    const Vec3 orth = g_perp - gp_unit * dot(g_perp, gp_unit);
    return orth + gp_unit * eta0;
}

TEST_CASE("residual of the pre-reduction form") {
    const double tol = 1e-10;

    SelfSimilarProfile empty;
    CHECK(selfsim_residual(empty) == 0.0);

    const double eta0 = 1e-3;
    Vec3 gp0{0.0, 0.8, 0.6};
    gp0 = gp0 / norm(gp0);
    const Vec3 g0 = compatible_g0({0.5, 0.0, 0.0}, gp0, eta0);
    const auto prof = selfsim_integrate(g0, gp0, eta0, 6.0, lia(), tol, 4001);
    const double res = selfsim_residual(prof);
    CHECK(res <= 10.0 * tol);

    // corrupting G by 1% blows the residual up by far more than 10x
    SelfSimilarProfile bad = prof;
    for (std::size_t i = 0; i < bad.G.size(); ++i)
        bad.G[i] *= 1.0 + 0.01 * std::sin(0.13 * static_cast<double>(i));
    CHECK(selfsim_residual(bad) >= 10.0 * res);
}

TEST_CASE("cross-form consistency holds with interaction") {
    // Discriminates the correct reduction: |G'| drifts away from 1, so any
    // misplaced |G'| power in the reduced equation leaves an O(eps) residual.
    const double tol = 1e-11;
    const double eta0 = 0.1;
    Vec3 gp0{0.4, 0.8, 0.45};
    gp0 = gp0 / norm(gp0);
    const Vec3 g0 = compatible_g0({1.0, -0.3, -0.35}, gp0, eta0);
    REQUIRE(g0.x > 0.5);
    const auto prof = selfsim_integrate(g0, gp0, eta0, 3.0, interacting(0.3), tol, 4001);

    double spread = 0.0;
    for (const Vec3& gp : prof.G_prime)
        spread = std::max(spread, std::abs(norm(gp) - 1.0));
    REQUIRE(spread > 1e-3); // |G'| really varies along the profile

    CHECK(selfsim_residual(prof) <= 1e-7);
}

TEST_CASE("profile blowup reports the last valid eta") {
    // steer G1 through zero: G1' < 0 with eps > 0
    try {
        (void)selfsim_integrate({0.05, 0.0, 0.0}, {-1.0, 0.0, 0.0}, 0.1, 5.0,
                                interacting(0.3), 1e-10, 101);
        FAIL("expected ProfileBlowup");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::profile_blowup);
        CHECK(std::string(e.what()).find("eta") != std::string::npos);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)selfsim_integrate({1, 0, 0}, {0, 1, 0}, 0.0, 1.0, interacting(0.3),
                                            1e-10, 101),
                    Error); // eta_start must be > 0 with eps > 0
    CHECK_THROWS_AS((void)selfsim_integrate({1, 0, 0}, {0, 0, 0}, 0.1, 1.0, lia(), 1e-10, 101),
                    Error); // |G0'| must be positive
}

} // TEST_SUITE
