#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polyorb/curve.hpp"
#include "polyorb/integrator.hpp"
#include "polyorb/polygon.hpp"

namespace polyorb {

/// Least-squares fit of log(metric) against log(n).
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0; // RMS of log-space residuals
    double slope_ci = 0.0;     // ~95% half-width of the slope estimate
    std::size_t dropped = 0;   // zero metric entries skipped
};

/// Fits log(metric) = slope*log(n) + intercept. Zero metric entries are
/// dropped (counted in FitResult::dropped); negative entries are invalid.
/// Requires >= 3 usable entries and strictly increasing positive n_values.
FitResult fit_order(const std::vector<double>& n_values, const std::vector<double>& metric);

/// Iterated Richardson limit of values sampled on refinement grids n_values
/// (error model c1/n + c2/n^2 + ...). Two elimination levels.
double richardson_limit(const std::vector<double>& n_values, const std::vector<double>& values);

struct ConvergenceReport {
    std::string study;             // chords | coverage | ratio | order | bound
    std::vector<double> n_values;  // grid actually fitted
    std::vector<double> metric;    // per-n study metric (ratio values for "ratio")
    double log_log_slope = 0.0;
    double slope_ci = 0.0;
    double residual = 0.0;
    double extrapolated_limit = 0.0;
    bool fit_valid = false;
    std::size_t dropped = 0;
};

/// Max chord length of the construction against n, first arc L/n. Grid entries
/// are independent, so threads > 1 distributes them without changing results.
ConvergenceReport chord_decay_study(const PlanarCurve& curve, const ForceCenter& center,
                                    double u_start, double length,
                                    const std::vector<std::size_t>& n_values,
                                    unsigned threads = 1);

/// Gap between the chord total and the arc length actually spanned between the
/// first and last vertex, against n. The gap closes at second order for smooth
/// curves; extrapolated_limit is the Richardson limit of the chord totals.
ConvergenceReport coverage_convergence(const PlanarCurve& curve, const ForceCenter& center,
                                       double u_start, double length,
                                       const std::vector<std::size_t>& n_values,
                                       unsigned threads = 1);

/// Check of the chord-growth bound: sum of |e(j)| against
/// s1^2 * (n_chords - 1) * max_curvature * margin.
struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 1.5;
    double max_curvature = 0.0;
    double signed_sum = 0.0;
    bool satisfied = false;
    bool sign_flag = false; // set when |sum e| and sum |e| differ by > 10%
    std::size_t n_chords = 0;
};

BoundCheck chord_growth_bound_check(const PolygonOrbit& orbit, const PlanarCurve& curve,
                                    double margin = 1.5);

/// Chord-sagitta estimate of the deflection at interior vertex j:
/// curvature(u_j) * s(j)^2 / sin(theta(j)). Agrees with the stored deflection
/// at leading order in the chord length.
double sagitta_deflection_estimate(const PolygonOrbit& orbit, const PlanarCurve& curve,
                                   std::size_t j);

/// Global convergence order of the impulse integrator. With an exact solution
/// the metric is the max position error over all steps; otherwise trajectories
/// are compared against a 4x-finer reference (aligned states when n divides
/// the reference grid, final state otherwise).
ConvergenceReport integrator_order_study(const ForceLaw& law, const Vector3& s,
                                         const Vector3& r0, const Vector3& v0, double total_time,
                                         const std::vector<std::size_t>& n_values,
                                         const std::function<Vector3(double)>& exact = nullptr,
                                         unsigned threads = 1);

/// Distance from a point to the curve (dense sampling plus local refinement).
double distance_to_curve(const PlanarCurve& curve, const Vector3& point);

} // namespace polyorb
