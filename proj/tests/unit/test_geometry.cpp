#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vfpair/errors.hpp"
#include "vfpair/geometry.hpp"
#include "vfpair/stencil.hpp"

using namespace vfp;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

FilamentState unit_circle(int n) {
    FilamentState st;
    st.grid = Grid::make(n, kTwoPi);
    st.X.resize(n);
    st.T.resize(n);
    st.L0.assign(n, 1.0);
    st.L0_prime.assign(n, 0.0);
    const double h = st.grid.spacing();
    for (int j = 0; j < n; ++j) {
        const double s = j * h;
        st.X[j] = {0.0, std::cos(s), std::sin(s)};
        st.T[j] = {0.0, -std::sin(s), std::cos(s)};
    }
    return st;
}
} // namespace

TEST_SUITE("geometry") {

TEST_CASE("perturbed pair at s=0 matches the closed form") {
    const double b = std::sqrt(0.05) / 2.0;
    ModelParams p{0.05, 5e-3, b, b / 20.0};
    const auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    CHECK(st.X[0].x == doctest::Approx(0.95 * b).epsilon(1e-14));
    CHECK(st.X[0].y == doctest::Approx(-b / 20.0).epsilon(1e-14));
    CHECK(st.X[0].z == doctest::Approx(-kPi).epsilon(1e-14));
}

TEST_CASE("unperturbed pair is a straight line with unit tangent") {
    ModelParams p{0.05, 0.05, 0.3, 0.0};
    const auto st = init_perturbed_pair(Grid::make(32, kTwoPi), p);
    for (const Vec3& t : st.T) CHECK(norm(t - Vec3{0, 0, 1}) == 0.0);
    for (std::size_t j = 0; j < st.size(); ++j) CHECK(st.X[j].x == 0.3);
    // L0 = (b^2 + r_c^2)^(eps/2) uniformly
    const double expect = std::pow(0.3 * 0.3 + 0.05 * 0.05, 0.025);
    for (double l : st.L0) CHECK(l == doctest::Approx(expect).epsilon(1e-15));
    for (double lp : st.L0_prime) CHECK(std::abs(lp) < 1e-15);
}

TEST_CASE("delta >= b is rejected") {
    ModelParams p{0.05, 0.01, 0.1, 0.1};
    CHECK_THROWS_AS((void)init_perturbed_pair(Grid::make(32, kTwoPi), p), Error);
}

TEST_CASE("cos perturbation requires extent 2*pi") {
    ModelParams p{0.05, 0.01, 0.1, 0.001};
    CHECK_THROWS_AS((void)init_perturbed_pair(Grid::make(32, 3.0), p), Error);
    p.delta = 0.0;
    CHECK_NOTHROW((void)init_perturbed_pair(Grid::make(32, 3.0), p));
}

TEST_CASE("tangents approximate dX/ds to stencil order") {
    const double b = 0.2;
    ModelParams p{0.05, 0.01, b, b / 20.0};
    const auto st = init_perturbed_pair(Grid::make(256, kTwoPi), p);
    const int n = st.grid.n_nodes;
    const double h = st.grid.spacing();
    std::vector<Vec3> xp(n);
    for (int j = 0; j < n; ++j) xp[j] = st.X[j] - Vec3{0.0, 0.0, j * h};
    auto t_fd = differentiate(xp, 1, h);
    for (int j = 0; j < n; ++j) {
        t_fd[j].z += 1.0;
        CHECK(norm(t_fd[j] - st.T[j]) < 1e-12);
    }
}

TEST_CASE("noise constructor is seed-reproducible and consistent") {
    ModelParams p{0.05, 0.01, 0.11, 0.0};
    const auto a = init_perturbed_pair(Grid::make(64, kTwoPi), p, 1e-4, 42);
    const auto b = init_perturbed_pair(Grid::make(64, kTwoPi), p, 1e-4, 42);
    const auto c = init_perturbed_pair(Grid::make(64, kTwoPi), p, 1e-4, 43);
    CHECK(a.X == b.X);
    CHECK(a.T == b.T);
    CHECK(a.X != c.X);
    // modulus law holds exactly at t = 0 by construction
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double law = a.L0[j] * std::pow(a.X[j].x * a.X[j].x + p.r_c * p.r_c,
                                              -0.5 * p.epsilon);
        CHECK(norm(a.T[j]) == doctest::Approx(law).epsilon(1e-13));
    }
}

TEST_CASE("eye curve hits the documented points") {
    const double b = 0.4;
    const double theta = kPi / 6.0;
    const auto st = init_eye(Grid::make(256, kTwoPi), b, theta);

    // s = pi/2 is node 64
    CHECK(norm(st.X[64] - Vec3{0.4, 0.0, 0.0}) < 1e-13);

    const double amp = 1.10838;
    CHECK(std::abs(st.X[0].z) == doctest::Approx(amp).epsilon(1e-4));
    CHECK(norm(st.X[0] - Vec3{0.0, -kPi / 2.0, -1.108384}) < 1e-5);
}

TEST_CASE("eye is mirror symmetric as a point set and closes") {
    const auto st = init_eye(Grid::make(128, kTwoPi), 0.4, kPi / 6.0);
    const int n = st.grid.n_nodes;
    for (int j = 1; j < n / 2; ++j) {
        const Vec3 mirrored{-st.X[j].x, st.X[j].y, st.X[j].z};
        CHECK(norm(st.X[n - j] - mirrored) < 1e-13);
    }
    CHECK(st.period_offset == Vec3{0, 0, 0});
    // one-sided tangents at the junction come from the reflected branch
    CHECK(st.T[0].y == doctest::Approx(-1.0));
}

TEST_CASE("invalid eye angle throws InvalidAngle") {
    CHECK_THROWS_WITH_AS((void)init_eye(Grid::make(64, kTwoPi), 0.2, kPi / 2.0),
                         doctest::Contains("InvalidAngle"), Error);
}

TEST_CASE("perimeter of the unit circle and the straight pair") {
    CHECK(perimeter(unit_circle(256)) == doctest::Approx(kTwoPi).epsilon(1e-9));
    ModelParams p{0.05, 0.01, 0.11, 0.0};
    const auto st = init_perturbed_pair(Grid::make(64, kTwoPi), p);
    CHECK(perimeter(st) == doctest::Approx(kTwoPi).epsilon(1e-13));
}

TEST_CASE("perimeter error decreases monotonically under refinement") {
    // |T| with a derivative kink keeps the trapezoid error at O(h^2), well
    // above the roundoff floor across the whole sweep.
    auto kinked = [](int n) {
        FilamentState st;
        st.grid = Grid::make(n, kTwoPi);
        st.X.assign(n, Vec3{});
        st.T.resize(n);
        st.L0.assign(n, 1.0);
        st.L0_prime.assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const double s = st.grid.param(j);
            st.T[j] = {0.0, 0.0, 2.0 + std::cos(s) + 0.5 * std::abs(std::cos(0.5 * s))};
        }
        return st;
    };
    const double exact = 4.0 * kPi + 2.0; // integral of |cos(s/2)| over a period is 4
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {64, 128, 256, 512}) {
        const double err = std::abs(perimeter(kinked(n)) - exact);
        CHECK(err < prev);
        prev = err;
    }
}

} // TEST_SUITE
