#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vfpair/dynamics.hpp"
#include "vfpair/geometry.hpp"

namespace vfp {

// ---------------------------------------------------------------------------
// Crow linear stability

struct CrowResult {
    double omega_threshold = 0.0;
    double lambda_min = 0.0;
    double translation_velocity = 0.0;
    std::vector<double> omegas;
    std::vector<std::array<std::complex<double>, 3>> eigenvalues;

    bool unstable(std::size_t i) const;
};

/// Linear stability of the straight translating pair: eigenvalues of the
/// 3x3 perturbation matrix per wavenumber (closed form: one zero root plus a
/// 2x2 block), the instability threshold and the shortest unstable wavelength.
CrowResult crow_analysis(const ModelParams& params, const std::vector<double>& omegas);

// ---------------------------------------------------------------------------
// Fluid impulse and reconnection detection

/// (1/2) * integral over an arclength window of (X - X0) x dX. The window is
/// `fraction` of the perimeter centered (in arclength) at node `center`; X0
/// defaults to the position of the center node. Crossing the periodic seam is
/// handled through the state's period offset.
Vec3 fluid_impulse(const FilamentState& state, int center, double fraction,
                   std::optional<Vec3> origin = std::nullopt);

/// Same integral over an explicit parameter interval [node_from, node_to]
/// (real-valued node coordinates, may cross the periodic seam). Splitting an
/// interval and summing the parts reproduces the whole to roundoff.
Vec3 fluid_impulse_interval(const FilamentState& state, double node_from, double node_to,
                            const Vec3& origin);

/// Gap proxy 2*min_j x1_j (exact on the symmetry plane).
double separation(const FilamentState& state);

/// Slow verification path: true minimal distance between the filament and its
/// mirror image, sampled node-to-node within the stored period.
double separation_exact(const FilamentState& state);

struct TimeSeries {
    std::vector<double> t;
    std::vector<Vec3> impulse;
    std::vector<double> separation;
    std::vector<double> max_t1_ratio;

    std::size_t size() const { return t.size(); }
    std::vector<double> impulse_component(int component) const; // 1..3
};

/// Standard per-sample diagnostics recorder for pair runs: fluid impulse on a
/// window recentered at the instantaneous argmin of x1, the separation proxy
/// and max |T1|/|T|.
class DiagnosticsRecorder {
public:
    DiagnosticsRecorder(ModelParams params, double fraction = 0.20)
        : params_(params), fraction_(fraction) {}

    void record(const FilamentState& state);
    const TimeSeries& series() const { return series_; }
    TimeSeries& series() { return series_; }

private:
    ModelParams params_;
    double fraction_;
    TimeSeries series_;
};

struct DetectorConfig {
    int min_extra_sign_changes = 3;
    double window = 0.05;
    /// Derivative magnitudes below this fraction of the signal's spread are
    /// treated as flat (0 keeps the raw sign test).
    double min_rel_slope = 0.0;
};

/// Earliest time where the signal's discrete derivative changes sign and at
/// least `min_extra_sign_changes` further sign changes follow within
/// `window`. Returns nullopt when no such transition exists.
std::optional<double> try_detect_reconnection(const std::vector<double>& times,
                                              const std::vector<double>& values,
                                              const DetectorConfig& config = {});

/// Throwing wrapper: NoTransition when the persistence test never passes.
double detect_reconnection(const TimeSeries& series, int component,
                           const DetectorConfig& config = {});

// ---------------------------------------------------------------------------
// Generalized Frenet frame diagnostics

struct FrenetDiagnostics {
    std::vector<double> kappa1;
    std::vector<double> kappa2;
    std::vector<double> omega_frame;
    std::vector<double> curvature;
    std::vector<unsigned char> valid;
    int degenerate_count = 0;
};

/// Frame diagnostics from the closed forms
///   kappa1 = d/ds(x1_s/L) / sqrt(L^2 - x1_s^2),
///   kappa2 = L*x1_t / sqrt(L^2 - x1_s^2),
///   omega  = kappa2*x1_s / sqrt(L^2 - x1_s^2),
/// with L = |T|. Nodes failing the frame guard L^2 - x1_s^2 > eta_guard*L^2
/// are flagged invalid; with strict=true any such node throws FrameDegenerate.
FrenetDiagnostics frenet_diagnostics(const FilamentState& state,
                                     const std::vector<Vec3>& dX_dt,
                                     double eta_guard = 1e-10, bool strict = false);

// ---------------------------------------------------------------------------
// Tangent-ratio bound

struct TangentRatioResult {
    double ratio = 0.0;        // max_j |T1|/|T|
    double bound = 0.0;        // sqrt(eps)/((1+eps)*pi)
    bool exceeds_bound = false;
    bool hypothesis_ok = false; // x1 monotone on an arc from gap min to gap max
    bool degenerate = false;    // x1 spread too small to test monotonicity
};

TangentRatioResult try_tangent_ratio(const FilamentState& state, const ModelParams& params);

/// Throwing wrapper: HypothesisViolated when the monotonicity hypothesis
/// fails (and the profile is not degenerate).
TangentRatioResult tangent_ratio(const FilamentState& state, const ModelParams& params);

// ---------------------------------------------------------------------------
// Riemann's non-differentiable function and multifractal probes

struct RndfValue {
    std::complex<double> value;
    double tail_bound = 0.0; // <= 1/terms
};

/// Partial sum of sum_k exp(i t k^2)/k^2 up to `terms`.
RndfValue rndf(double t, int terms);

/// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

struct SquareDominance {
    std::vector<int> square_indices;
    std::vector<double> square_energy;
    std::vector<double> neighbor_energy;
    double dominance_ratio = 0.0;
    std::vector<double> spectrum; // |c_m|^2 for m = 0..N/2
};

/// Energy at indices {k^2 * base} versus their immediate neighbors in the
/// discrete spectrum of a uniformly sampled complex signal.
SquareDominance fourier_square_dominance(const std::vector<std::complex<double>>& samples,
                                         int base_index = 1, int max_k = 5);

enum class ProbeClass { maximum, minimum, neither };

struct ProbeMarker {
    int p = 0;
    int q = 1;
    double t = 0.0;
    ProbeClass classification = ProbeClass::neither;
    double peak_size = 0.0;
};

/// Classify the neighborhood of each rational multiple (p/q)*t_star of a
/// reference time as a discrete local maximum/minimum of the sampled signal.
std::vector<ProbeMarker> rational_probe(const std::vector<double>& times,
                                        const std::vector<double>& values, double t_star,
                                        const std::vector<std::pair<int, int>>& rationals,
                                        int half_width = 4);

// ---------------------------------------------------------------------------
// Small numeric utilities

struct PowerLawFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;
    int points_used = 0;
};

/// Least-squares fit of y ~ C * x^p on log-log axes; nonpositive samples are
/// skipped.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

/// Cubic (Catmull-Rom) resampling of a scalar series onto n uniform points
/// over [times.front(), t_end).
std::vector<double> resample_uniform(const std::vector<double>& times,
                                     const std::vector<double>& values, double t_end, int n);

/// Amplitude of the k-th Fourier mode of a real periodic field (2/n
/// normalization, so a pure cosine of amplitude a reports a).
double mode_amplitude(const std::vector<double>& field, int k);

/// Index (>=1) of the strongest Fourier mode of field minus its mean,
/// searched up to k_max inclusive.
int dominant_mode(const std::vector<double>& field, int k_max);

/// RMS distance to a reference shape after removing the centroid; used as the
/// recurrence descriptor for quasi-period estimation.
class ShapeDescriptor {
public:
    explicit ShapeDescriptor(const FilamentState& reference);
    double operator()(const FilamentState& state) const;

private:
    std::vector<Vec3> ref_centered_;
    double scale_ = 1.0;
};

/// Location of the minimum of a sampled descriptor within [t_lo, t_hi],
/// refined with a 3-point parabolic fit.
double estimate_quasi_period(const std::vector<double>& times,
                             const std::vector<double>& descriptor, double t_lo, double t_hi);

} // namespace vfp
