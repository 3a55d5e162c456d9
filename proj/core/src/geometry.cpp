#include "vfpair/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "vfpair/errors.hpp"
#include "vfpair/stencil.hpp"

namespace vfp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_two_pi(double extent) { return std::abs(extent - kTwoPi) <= 1e-12; }
} // namespace

Grid Grid::make(int n_nodes, double extent) {
    Grid g{n_nodes, extent};
    g.validate();
    return g;
}

void Grid::validate() const {
    if (n_nodes < 16)
        throw Error(ErrorCode::invalid_params,
                    "grid needs at least 16 nodes, got " + std::to_string(n_nodes));
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw Error(ErrorCode::invalid_params, "grid extent must be positive");
}

void ModelParams::validate_pair() const {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw Error(ErrorCode::invalid_params, "epsilon must be in (0, 1] for the pair problem");
    if (r_c < 0.0) throw Error(ErrorCode::invalid_params, "r_c must be nonnegative");
    if (!(b > 0.0)) throw Error(ErrorCode::invalid_params, "half-separation b must be positive");
    if (!(r_c < b))
        throw Error(ErrorCode::invalid_params, "core radius r_c must be smaller than b");
    if (delta < 0.0) throw Error(ErrorCode::invalid_params, "delta must be nonnegative");
}

FilamentState init_perturbed_pair(const Grid& grid, const ModelParams& params,
                                  double noise_amplitude, std::uint64_t seed) {
    grid.validate();
    params.validate_pair();
    if (params.delta >= params.b)
        throw Error(ErrorCode::invalid_params,
                    "delta >= b: the vortices would intersect at t = 0");
    if (params.delta != 0.0 && !is_two_pi(grid.extent))
        throw Error(ErrorCode::invalid_params,
                    "the cos(s) perturbation is periodic only on extent 2*pi; "
                    "use delta = 0 with noise on other extents");

    const int n = grid.n_nodes;
    const double h = grid.spacing();
    const double half = 0.5 * grid.extent;

    FilamentState st;
    st.grid = grid;
    st.X.resize(n);
    st.T.resize(n);
    st.L0.resize(n);
    st.L0_prime.resize(n);
    st.period_offset = {0.0, 0.0, grid.extent};

    for (int j = 0; j < n; ++j) {
        const double s = j * h;
        st.X[j] = {params.b - params.delta * std::cos(s), -params.delta * std::cos(s), s - half};
        st.T[j] = {params.delta * std::sin(s), params.delta * std::sin(s), 1.0};
    }

    const bool noisy = noise_amplitude > 0.0;
    if (noisy) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, noise_amplitude);
        for (int j = 0; j < n; ++j) {
            st.X[j].x += gauss(rng);
            st.X[j].y += gauss(rng);
        }
        // Tangents from the stencil derivative of the periodic part of X so
        // the state stays consistent to stencil order.
        std::vector<Vec3> xp(n);
        for (int j = 0; j < n; ++j) xp[j] = st.X[j] - Vec3{0.0, 0.0, j * h};
        st.T = differentiate(xp, 1, h);
        for (int j = 0; j < n; ++j) st.T[j].z += 1.0;
    }

    const double ehalf = 0.5 * params.epsilon;
    for (int j = 0; j < n; ++j) {
        const double x1 = st.X[j].x;
        const double d = x1 * x1 + params.r_c * params.r_c;
        st.L0[j] = norm(st.T[j]) * std::pow(d, ehalf);
    }

    if (noisy) {
        st.L0_prime = differentiate(st.L0, 1, h);
    } else {
        for (int j = 0; j < n; ++j) {
            const double s = j * h;
            const double x1 = st.X[j].x;
            const double d = x1 * x1 + params.r_c * params.r_c;
            const double tn = norm(st.T[j]);
            const double dtn = params.delta * params.delta * std::sin(2.0 * s) / tn;
            const double dx1 = params.delta * std::sin(s);
            st.L0_prime[j] =
                std::pow(d, ehalf) * (dtn + tn * params.epsilon * x1 * dx1 / d);
        }
    }
    return st;
}

FilamentState init_eye(const Grid& grid, double b, double theta) {
    grid.validate();
    if (!is_two_pi(grid.extent))
        throw Error(ErrorCode::invalid_params, "the eye curve is defined on extent 2*pi");
    if (!(b > 0.0)) throw Error(ErrorCode::invalid_params, "eye thickness b must be positive");

    const double c = std::cos(theta);
    const double arg = (1.0 + c) / (1.0 - c) - 1.0 / (b * b);
    if (!(arg >= 0.0) || !std::isfinite(arg))
        throw Error(ErrorCode::invalid_angle,
                    "(1+cos(theta))/(1-cos(theta)) - 1/b^2 = " + std::to_string(arg) +
                        " is negative; enlarge b or reduce theta");
    const double a = b * std::sqrt(arg);

    const int n = grid.n_nodes;
    const double h = grid.spacing();
    constexpr double pi = std::numbers::pi;

    FilamentState st;
    st.grid = grid;
    st.X.resize(n);
    st.T.resize(n);
    st.L0.resize(n);
    st.L0_prime.resize(n);
    st.period_offset = {0.0, 0.0, 0.0};

    for (int j = 0; j < n; ++j) {
        // Node 0 sits at s = 0 == 2*pi and belongs to the reflected branch.
        const double s = (j == 0) ? kTwoPi : j * h;
        if (s <= pi) {
            st.X[j] = {b * std::sin(s), s - 0.5 * pi, -a * std::cos(s)};
            st.T[j] = {b * std::cos(s), 1.0, a * std::sin(s)};
            st.L0_prime[j] = (a * a - b * b) * std::sin(s) * std::cos(s);
        } else {
            const double sig = kTwoPi - s;
            st.X[j] = {-b * std::sin(sig), sig - 0.5 * pi, -a * std::cos(sig)};
            st.T[j] = {b * std::cos(sig), -1.0, -a * std::sin(sig)};
            st.L0_prime[j] = -(a * a - b * b) * std::sin(sig) * std::cos(sig);
        }
        st.L0[j] = norm(st.T[j]);
        st.L0_prime[j] /= st.L0[j];
    }
    return st;
}

double perimeter(const FilamentState& state) {
    const double h = state.grid.spacing();
    double acc = 0.0;
    for (const Vec3& t : state.T) acc += norm(t);
    return acc * h;
}

double min_x1(const FilamentState& state) {
    double m = state.X[0].x;
    for (const Vec3& p : state.X) m = std::min(m, p.x);
    return m;
}

int argmin_x1(const FilamentState& state) {
    int jm = 0;
    for (int j = 1; j < static_cast<int>(state.size()); ++j)
        if (state.X[j].x < state.X[jm].x) jm = j;
    return jm;
}

double max_x1(const FilamentState& state) {
    double m = state.X[0].x;
    for (const Vec3& p : state.X) m = std::max(m, p.x);
    return m;
}

double mean_x2(const FilamentState& state) {
    double acc = 0.0;
    for (const Vec3& p : state.X) acc += p.y;
    return acc / static_cast<double>(state.size());
}

} // namespace vfp
