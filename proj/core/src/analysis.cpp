#include "vfpair/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vfpair/errors.hpp"
#include "vfpair/stencil.hpp"

namespace vfp {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

// ---------------------------------------------------------------------------
// Crow linear stability

bool CrowResult::unstable(std::size_t i) const {
    for (const auto& ev : eigenvalues[i])
        if (ev.real() > 1e-12) return true;
    return false;
}

CrowResult crow_analysis(const ModelParams& params, const std::vector<double>& omegas) {
    if (!(params.b > params.r_c))
        throw Error(ErrorCode::invalid_params, "crow analysis needs b > r_c");
    const double b2 = params.b * params.b;
    const double rc2 = params.r_c * params.r_c;
    const double d = b2 + rc2;

    CrowResult res;
    res.translation_velocity = -params.epsilon * params.b / d;
    res.omega_threshold = std::sqrt(params.epsilon * (b2 - rc2)) / d;
    res.lambda_min = kTwoPi / res.omega_threshold;
    res.omegas = omegas;
    res.eigenvalues.resize(omegas.size());

    // Characteristic cubic factors into a zero root and the 2x2 block made of
    // the first two rows; the third row only feeds the zero mode.
    const double coupling = params.epsilon * (rc2 - b2) / (d * d);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double w = omegas[i];
        const double mu2 = w * w * (-w * w - coupling);
        std::array<std::complex<double>, 3> ev{};
        ev[0] = 0.0;
        if (mu2 >= 0.0) {
            const double m = std::sqrt(mu2);
            ev[1] = m;
            ev[2] = -m;
        } else {
            const double m = std::sqrt(-mu2);
            ev[1] = std::complex<double>(0.0, m);
            ev[2] = std::complex<double>(0.0, -m);
        }
        res.eigenvalues[i] = ev;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Fluid impulse

namespace {

// Position of node j unwrapped relative to a window that starts at node
// `start` (start may exceed n; offsets accumulate per full wrap).
Vec3 unwrapped(const FilamentState& st, long j) {
    const long n = static_cast<long>(st.size());
    long w = j >= 0 ? j / n : -((-j + n - 1) / n);
    const long jj = j - w * n;
    return st.X[static_cast<std::size_t>(jj)] + st.period_offset * static_cast<double>(w);
}

} // namespace

Vec3 fluid_impulse_interval(const FilamentState& state, double node_from, double node_to,
                            const Vec3& origin) {
    const long n = static_cast<long>(state.size());
    const double h = state.grid.spacing();
    auto integrand = [&](long j) {
        const Vec3 x = unwrapped(state, j);
        const std::size_t jj = static_cast<std::size_t>(((j % n) + n) % n);
        return cross(x - origin, state.T[jj]);
    };
    // Piecewise-linear integrand between nodes; sub-intervals integrate
    // exactly, so any split of the window adds up to the whole.
    Vec3 acc{};
    double pos = node_from;
    while (pos < node_to - 1e-14) {
        const long j = static_cast<long>(std::floor(pos + 1e-14));
        const double next = std::min(node_to, static_cast<double>(j + 1));
        const double u0 = pos - j;
        const double u1 = next - j;
        const Vec3 fa = integrand(j);
        const Vec3 fb = integrand(j + 1);
        acc += (fa * (u1 - u0) + (fb - fa) * (0.5 * (u1 * u1 - u0 * u0))) * h;
        pos = next;
    }
    return acc * 0.5;
}

Vec3 fluid_impulse(const FilamentState& state, int center, double fraction,
                   std::optional<Vec3> origin) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw Error(ErrorCode::invalid_params, "window fraction must be in (0, 1]");
    const long n = static_cast<long>(state.size());
    const double h = state.grid.spacing();
    const double half_target = 0.5 * fraction * perimeter(state);
    const Vec3 x0 = origin.value_or(state.X[static_cast<std::size_t>(((center % n) + n) % n)]);

    auto seg_len = [&](long j) {
        const double a = norm(state.T[static_cast<std::size_t>(((j % n) + n) % n)]);
        const double b = norm(state.T[static_cast<std::size_t>((((j + 1) % n) + n) % n)]);
        return 0.5 * (a + b) * h;
    };

    // Walk segments outward from the center node until each side of the
    // window covers half the target arclength.
    auto walk = [&](int dir) {
        double remaining = half_target;
        double offset = 0.0;
        for (long steps = 0; steps < n; ++steps) {
            const long j = dir > 0 ? center + steps : center - steps - 1;
            const double l = seg_len(j);
            if (remaining < l) {
                offset += remaining / l;
                return offset;
            }
            remaining -= l;
            offset += 1.0;
        }
        return offset;
    };
    const double right = walk(+1);
    const double left = walk(-1);
    return fluid_impulse_interval(state, center - left, center + right, x0);
}

double separation(const FilamentState& state) { return 2.0 * min_x1(state); }

double separation_exact(const FilamentState& state) {
    const std::size_t n = state.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 xi = state.X[i];
        for (std::size_t j = 0; j < n; ++j) {
            const Vec3 yj{-state.X[j].x, state.X[j].y, state.X[j].z};
            best = std::min(best, norm(xi - yj));
        }
    }
    return best;
}

std::vector<double> TimeSeries::impulse_component(int component) const {
    std::vector<double> out(impulse.size());
    for (std::size_t i = 0; i < impulse.size(); ++i) out[i] = impulse[i][component - 1];
    return out;
}

void DiagnosticsRecorder::record(const FilamentState& state) {
    const int center = argmin_x1(state);
    series_.t.push_back(state.time);
    series_.impulse.push_back(fluid_impulse(state, center, fraction_));
    series_.separation.push_back(separation(state));
    double ratio = 0.0;
    for (const Vec3& t : state.T) ratio = std::max(ratio, std::abs(t.x) / norm(t));
    series_.max_t1_ratio.push_back(ratio);
}

// ---------------------------------------------------------------------------
// Reconnection detector

std::optional<double> try_detect_reconnection(const std::vector<double>& times,
                                              const std::vector<double>& values,
                                              const DetectorConfig& config) {
    const std::size_t n = times.size();
    if (values.size() != n)
        throw Error(ErrorCode::invalid_params, "times/values length mismatch");
    if (n < 3) return std::nullopt;

    double spread = 0.0;
    {
        double lo = values[0], hi = values[0];
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        spread = hi - lo;
    }
    const double floor_abs = config.min_rel_slope * spread;

    // Sign-change times of the discrete derivative; flat or sub-floor
    // derivatives carry the previous sign.
    std::vector<double> change_times;
    int prev_sign = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = values[i + 1] - values[i];
        if (std::abs(d) <= floor_abs) continue;
        const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (prev_sign != 0 && s != prev_sign) change_times.push_back(times[i]);
        prev_sign = s;
    }
    for (std::size_t k = 0; k < change_times.size(); ++k) {
        const double t_star = change_times[k];
        int extra = 0;
        for (std::size_t m = k + 1; m < change_times.size(); ++m) {
            if (change_times[m] <= t_star + config.window) ++extra;
            else break;
        }
        if (extra >= config.min_extra_sign_changes) return t_star;
    }
    return std::nullopt;
}

double detect_reconnection(const TimeSeries& series, int component,
                           const DetectorConfig& config) {
    auto t = try_detect_reconnection(series.t, series.impulse_component(component), config);
    if (!t)
        throw Error(ErrorCode::no_transition,
                    "no monotone-to-oscillatory transition found in component " +
                        std::to_string(component));
    return *t;
}

// ---------------------------------------------------------------------------
// Frenet diagnostics

FrenetDiagnostics frenet_diagnostics(const FilamentState& state,
                                     const std::vector<Vec3>& dX_dt,
                                     double eta_guard, bool strict) {
    const std::size_t n = state.size();
    if (dX_dt.size() != n)
        throw Error(ErrorCode::invalid_params, "dX_dt size mismatch");
    const double h = state.grid.spacing();

    std::vector<double> L(n), x1s_over_L(n);
    for (std::size_t j = 0; j < n; ++j) {
        L[j] = norm(state.T[j]);
        x1s_over_L[j] = state.T[j].x / L[j];
    }
    const std::vector<double> dsl = differentiate(x1s_over_L, 1, h);

    FrenetDiagnostics out;
    out.kappa1.assign(n, 0.0);
    out.kappa2.assign(n, 0.0);
    out.omega_frame.assign(n, 0.0);
    out.curvature.assign(n, 0.0);
    out.valid.assign(n, 1);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < n; ++j) {
        const double L2 = L[j] * L[j];
        const double x1s = state.T[j].x;
        const double disc = L2 - x1s * x1s;
        if (!(disc > eta_guard * L2)) {
            if (strict)
                throw Error(ErrorCode::frame_degenerate,
                            "tangent aligned with e1 at node " + std::to_string(j));
            out.valid[j] = 0;
            ++out.degenerate_count;
            out.kappa1[j] = out.kappa2[j] = out.omega_frame[j] = out.curvature[j] = nan;
            continue;
        }
        const double root = std::sqrt(disc);
        out.kappa1[j] = dsl[j] / root;
        out.kappa2[j] = L[j] * dX_dt[j].x / root;
        out.omega_frame[j] = out.kappa2[j] * x1s / root;
        out.curvature[j] = std::hypot(out.kappa1[j], out.kappa2[j]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tangent ratio

TangentRatioResult try_tangent_ratio(const FilamentState& state, const ModelParams& params) {
    TangentRatioResult out;
    out.bound = std::sqrt(params.epsilon) / ((1.0 + params.epsilon) * kPi);
    for (const Vec3& t : state.T)
        out.ratio = std::max(out.ratio, std::abs(t.x) / norm(t));
    out.exceeds_bound = out.ratio >= out.bound;

    const int n = static_cast<int>(state.size());
    const int jmin = argmin_x1(state);
    int jmax = 0;
    for (int j = 1; j < n; ++j)
        if (state.X[j].x > state.X[jmax].x) jmax = j;
    const double spread = state.X[jmax].x - state.X[jmin].x;
    if (spread < 1e-12 * std::max(1.0, std::abs(state.X[jmax].x))) {
        out.degenerate = true;
        return out;
    }

    const double tol = 1e-12 * spread;
    auto monotone_arc = [&](int from, int to, int dir) {
        double prev = state.X[from].x;
        for (int j = from; j != to;) {
            j = (j + dir + n) % n;
            if (state.X[j].x < prev - tol) return false;
            prev = std::max(prev, state.X[j].x);
        }
        return true;
    };
    out.hypothesis_ok = monotone_arc(jmin, jmax, +1) || monotone_arc(jmin, jmax, -1);
    return out;
}

TangentRatioResult tangent_ratio(const FilamentState& state, const ModelParams& params) {
    TangentRatioResult out = try_tangent_ratio(state, params);
    if (!out.degenerate && !out.hypothesis_ok)
        throw Error(ErrorCode::hypothesis_violated,
                    "x1 is not monotone between the gap minimum and maximum");
    return out;
}

// ---------------------------------------------------------------------------
// RNDF and spectra

RndfValue rndf(double t, int terms) {
    if (terms < 1) throw Error(ErrorCode::invalid_params, "terms must be >= 1");
    std::complex<double> acc = 0.0;
    for (int k = 1; k <= terms; ++k) {
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        acc += std::polar(1.0 / kk, t * kk);
    }
    return {acc, 1.0 / static_cast<double>(terms)};
}

void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw Error(ErrorCode::invalid_params, "FFT size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const std::complex<double> wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

SquareDominance fourier_square_dominance(const std::vector<std::complex<double>>& samples,
                                         int base_index, int max_k) {
    std::vector<std::complex<double>> a = samples;
    fft_radix2(a);
    const std::size_t n = a.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    SquareDominance out;
    out.spectrum.resize(n / 2 + 1);
    for (std::size_t m = 0; m <= n / 2; ++m) out.spectrum[m] = std::norm(a[m] * inv_n);

    double sq_sum = 0.0;
    double nb_sum = 0.0;
    for (int k = 1; k <= max_k; ++k) {
        const int idx = k * k * base_index;
        if (idx + 1 > static_cast<int>(n / 2)) break;
        const double es = out.spectrum[idx];
        double en;
        if (k == 1) {
            en = out.spectrum[idx + 1]; // lower neighbor would be the DC bin
        } else {
            en = 0.5 * (out.spectrum[idx - 1] + out.spectrum[idx + 1]);
        }
        out.square_indices.push_back(idx);
        out.square_energy.push_back(es);
        out.neighbor_energy.push_back(en);
        sq_sum += es;
        nb_sum += en;
    }
    out.dominance_ratio = nb_sum > 0.0 ? sq_sum / nb_sum
                                       : std::numeric_limits<double>::infinity();
    return out;
}

std::vector<ProbeMarker> rational_probe(const std::vector<double>& times,
                                        const std::vector<double>& values, double t_star,
                                        const std::vector<std::pair<int, int>>& rationals,
                                        int half_width) {
    const std::size_t n = times.size();
    if (values.size() != n || n == 0)
        throw Error(ErrorCode::invalid_params, "times/values length mismatch");
    std::vector<ProbeMarker> out;
    for (auto [p, q] : rationals) {
        ProbeMarker m;
        m.p = p;
        m.q = q;
        m.t = t_star * static_cast<double>(p) / static_cast<double>(q);
        const auto it = std::lower_bound(times.begin(), times.end(), m.t);
        std::size_t c = static_cast<std::size_t>(std::distance(times.begin(), it));
        if (c > 0 && (c == n || m.t - times[c - 1] < times[c] - m.t)) --c;
        const std::size_t lo = c >= static_cast<std::size_t>(half_width)
                                   ? c - static_cast<std::size_t>(half_width)
                                   : 0;
        const std::size_t hi = std::min(n - 1, c + static_cast<std::size_t>(half_width));
        double wmin = values[lo], wmax = values[lo];
        for (std::size_t i = lo; i <= hi; ++i) {
            wmin = std::min(wmin, values[i]);
            wmax = std::max(wmax, values[i]);
        }
        const double edge = 0.5 * (values[lo] + values[hi]);
        const double span = wmax - wmin;
        const double tiny = 1e-12 * std::max(1.0, std::abs(wmax));
        if (span <= tiny) {
            m.classification = ProbeClass::neither;
        } else if (values[c] >= wmax - 1e-14 * span && values[c] > edge + tiny) {
            m.classification = ProbeClass::maximum;
            m.peak_size = values[c] - edge;
        } else if (values[c] <= wmin + 1e-14 * span && values[c] < edge - tiny) {
            m.classification = ProbeClass::minimum;
            m.peak_size = edge - values[c];
        } else {
            m.classification = ProbeClass::neither;
        }
        out.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fits, resampling, modes

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    const LinearFit f = fit_linear(lx, ly);
    return {f.slope, f.intercept, static_cast<int>(lx.size())};
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) throw Error(ErrorCode::invalid_params, "need at least two points to fit");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    LinearFit f;
    f.slope = (dn * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / dn;
    return f;
}

std::vector<double> resample_uniform(const std::vector<double>& times,
                                     const std::vector<double>& values, double t_end, int n) {
    const std::size_t m = times.size();
    if (values.size() != m || m < 4)
        throw Error(ErrorCode::invalid_params, "need at least 4 samples to resample");
    std::vector<double> out(n);
    const double t0 = times.front();
    const double dt = (t_end - t0) / static_cast<double>(n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + dt * i;
        while (k + 2 < m && times[k + 1] <= t) ++k;
        // Catmull-Rom on the bracketing points (clamped ends).
        const std::size_t k0 = k > 0 ? k - 1 : 0;
        const std::size_t k2 = std::min(k + 1, m - 1);
        const std::size_t k3 = std::min(k + 2, m - 1);
        const double h = times[k2] - times[k];
        if (h <= 0.0) {
            out[i] = values[k];
            continue;
        }
        const double u = std::clamp((t - times[k]) / h, 0.0, 1.0);
        const double p0 = values[k0], p1 = values[k], p2 = values[k2], p3 = values[k3];
        out[i] = p1 + 0.5 * u * (p2 - p0 +
                      u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                      u * (3.0 * (p1 - p2) + p3 - p0)));
    }
    return out;
}

double mode_amplitude(const std::vector<double>& field, int k) {
    const std::size_t n = field.size();
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = kTwoPi * k * static_cast<double>(j) / static_cast<double>(n);
        re += field[j] * std::cos(ang);
        im -= field[j] * std::sin(ang);
    }
    return 2.0 * std::hypot(re, im) / static_cast<double>(n);
}

int dominant_mode(const std::vector<double>& field, int k_max) {
    std::vector<double> centered = field;
    const double mean = std::accumulate(field.begin(), field.end(), 0.0) /
                        static_cast<double>(field.size());
    for (double& v : centered) v -= mean;
    int best = 1;
    double best_amp = -1.0;
    for (int k = 1; k <= k_max; ++k) {
        const double a = mode_amplitude(centered, k);
        if (a > best_amp) {
            best_amp = a;
            best = k;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Shape recurrence

ShapeDescriptor::ShapeDescriptor(const FilamentState& reference) {
    const std::size_t n = reference.size();
    Vec3 c{};
    for (const Vec3& p : reference.X) c += p;
    c = c / static_cast<double>(n);
    ref_centered_.resize(n);
    double s2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        ref_centered_[j] = reference.X[j] - c;
        s2 += norm2(ref_centered_[j]);
    }
    scale_ = std::sqrt(s2 / static_cast<double>(n));
}

double ShapeDescriptor::operator()(const FilamentState& state) const {
    const std::size_t n = state.size();
    if (n != ref_centered_.size())
        throw Error(ErrorCode::invalid_params, "descriptor grid mismatch");
    Vec3 c{};
    for (const Vec3& p : state.X) c += p;
    c = c / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += norm2(state.X[j] - c - ref_centered_[j]);
    return std::sqrt(acc / static_cast<double>(n)) / scale_;
}

double estimate_quasi_period(const std::vector<double>& times,
                             const std::vector<double>& descriptor, double t_lo, double t_hi) {
    const std::size_t n = times.size();
    if (descriptor.size() != n || n < 3)
        throw Error(ErrorCode::invalid_params, "descriptor series too short");
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (descriptor[i] < best_v) {
            best_v = descriptor[i];
            best = i;
            found = true;
        }
    }
    if (!found)
        throw Error(ErrorCode::invalid_params, "search window contains no samples");
    if (best == 0 || best + 1 >= n) return times[best];
    // 3-point parabolic refinement.
    const double y0 = descriptor[best - 1], y1 = descriptor[best], y2 = descriptor[best + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) < 1e-300) return times[best];
    const double shift = 0.5 * (y0 - y2) / denom;
    const double dt = 0.5 * (times[best + 1] - times[best - 1]);
    return times[best] + std::clamp(shift, -1.0, 1.0) * dt;
}

} // namespace vfp
