#include "polyorb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polyorb/errors.hpp"
#include "polyorb/parallel.hpp"

namespace polyorb {

namespace {

void validate_grid(const std::vector<std::size_t>& n_values, std::size_t min_count) {
    if (n_values.size() < min_count)
        throw std::invalid_argument("need at least " + std::to_string(min_count) +
                                    " grid sizes");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] == 0) throw std::invalid_argument("grid sizes must be positive");
        if (i > 0 && n_values[i] <= n_values[i - 1])
            throw std::invalid_argument("grid sizes must be strictly increasing");
    }
}

void fill_fit(ConvergenceReport& report, const std::vector<double>& n,
              const std::vector<double>& metric) {
    try {
        FitResult fit = fit_order(n, metric);
        report.log_log_slope = fit.slope;
        report.slope_ci = fit.slope_ci;
        report.residual = fit.residual_rms;
        report.dropped = fit.dropped;
        report.fit_valid = true;
    } catch (const std::invalid_argument&) {
        report.fit_valid = false;
    }
}

PolygonOrbit study_orbit(const PlanarCurve& curve, const ForceCenter& center, double u_start,
                         double length, std::size_t n) {
    double arc = length / static_cast<double>(n);
    double s1 = curve.chord_for_arc(u_start, arc);
    return construct(curve, center, u_start, s1, n);
}

} // namespace

FitResult fit_order(const std::vector<double>& n_values, const std::vector<double>& metric) {
    if (n_values.size() != metric.size())
        throw std::invalid_argument("fit_order: size mismatch");
    std::vector<double> x, y;
    FitResult result;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (!(n_values[i] > 0.0)) throw std::invalid_argument("fit_order: n must be positive");
        if (i > 0 && !(n_values[i] > n_values[i - 1]))
            throw std::invalid_argument("fit_order: n must be strictly increasing");
        require_finite(metric[i], "fit metric");
        if (metric[i] < 0.0)
            throw std::invalid_argument("fit_order: metric must be non-negative");
        if (metric[i] == 0.0) {
            ++result.dropped;
            continue;
        }
        x.push_back(std::log(n_values[i]));
        y.push_back(std::log(metric[i]));
    }
    const std::size_t m = x.size();
    if (m < 3) throw std::invalid_argument("fit_order: need at least 3 usable entries");

    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) { xbar += x[i]; ybar += y[i]; }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    result.slope = sxy / sxx;
    result.intercept = ybar - result.slope * xbar;

    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = y[i] - (result.intercept + result.slope * x[i]);
        rss += r * r;
    }
    result.residual_rms = std::sqrt(rss / static_cast<double>(m));
    if (m > 2) result.slope_ci = 1.96 * std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    return result;
}

double richardson_limit(const std::vector<double>& n_values, const std::vector<double>& values) {
    if (n_values.size() != values.size())
        throw std::invalid_argument("richardson_limit: size mismatch");
    if (values.size() < 2)
        throw std::invalid_argument("richardson_limit: need at least 2 values");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (!(n_values[i] > 0.0))
            throw std::invalid_argument("richardson_limit: grids must be positive");
        if (i > 0 && !(n_values[i] > n_values[i - 1]))
            throw std::invalid_argument("richardson_limit: grids must be strictly increasing");
        require_finite(values[i], "richardson value");
    }

    std::vector<double> cur = values;
    std::size_t levels = std::min<std::size_t>(2, cur.size() - 1);
    for (std::size_t k = 1; k <= levels; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            double wa = 1.0, wb = 1.0;
            for (std::size_t t = 0; t < k; ++t) {
                wa *= n_values[i + t];
                wb *= n_values[i + 1 + t];
            }
            next[i] = (wb * cur[i + 1] - wa * cur[i]) / (wb - wa);
        }
        cur = std::move(next);
    }
    return cur.back();
}

ConvergenceReport chord_decay_study(const PlanarCurve& curve, const ForceCenter& center,
                                    double u_start, double length,
                                    const std::vector<std::size_t>& n_values,
                                    unsigned threads) {
    validate_grid(n_values, 3);
    if (!(length > 0.0)) throw std::invalid_argument("target length must be positive");

    ConvergenceReport report;
    report.study = "chords";
    report.n_values.resize(n_values.size());
    report.metric.resize(n_values.size());
    detail::parallel_for(n_values.size(), threads, [&](std::size_t i) {
        PolygonOrbit orbit = study_orbit(curve, center, u_start, length, n_values[i]);
        if (orbit.chords.empty())
            throw NumericalError("chord study produced an empty polygon");
        report.n_values[i] = static_cast<double>(n_values[i]);
        report.metric[i] = *std::max_element(orbit.chords.begin(), orbit.chords.end());
    });
    report.extrapolated_limit = richardson_limit(report.n_values, report.metric);
    fill_fit(report, report.n_values, report.metric);
    return report;
}

ConvergenceReport coverage_convergence(const PlanarCurve& curve, const ForceCenter& center,
                                       double u_start, double length,
                                       const std::vector<std::size_t>& n_values,
                                       unsigned threads) {
    validate_grid(n_values, 3);
    if (length < 0.0) throw std::invalid_argument("target length must be non-negative");

    ConvergenceReport report;
    report.study = "coverage";
    if (length == 0.0) {
        for (std::size_t n : n_values) {
            report.n_values.push_back(static_cast<double>(n));
            report.metric.push_back(0.0);
        }
        report.fit_valid = false;
        report.extrapolated_limit = 0.0;
        return report;
    }

    std::vector<double> grid(n_values.size()), totals(n_values.size()),
        gaps(n_values.size());
    detail::parallel_for(n_values.size(), threads, [&](std::size_t i) {
        PolygonOrbit orbit = study_orbit(curve, center, u_start, length, n_values[i]);
        grid[i] = static_cast<double>(n_values[i]);
        totals[i] = coverage_length(orbit);
        // the polygon covers the curve between its first and last vertex; the
        // study metric is the gap between the chord total and that arc length
        double arc = curve.arc_length(orbit.params.front(), orbit.params.back());
        gaps[i] = std::fabs(arc - totals[i]);
    });
    report.n_values = grid;
    report.metric = gaps;
    report.extrapolated_limit = richardson_limit(grid, totals);
    fill_fit(report, report.n_values, report.metric);
    return report;
}

BoundCheck chord_growth_bound_check(const PolygonOrbit& orbit, const PlanarCurve& curve,
                                    double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("margin must be positive");
    BoundCheck check;
    check.margin = margin;
    check.n_chords = orbit.chords.size();
    if (orbit.chords.size() < 2) {
        check.satisfied = true;
        return check;
    }

    for (double e : orbit.chord_increments()) {
        check.lhs += std::fabs(e);
        check.signed_sum += e;
    }
    check.max_curvature = curve.max_curvature(orbit.params.front(), orbit.params.back());
    double s1 = orbit.chords.front();
    check.rhs = s1 * s1 * static_cast<double>(orbit.chords.size() - 1) * check.max_curvature *
                margin;
    check.satisfied = check.lhs <= check.rhs;
    if (check.lhs > 0.0) check.sign_flag = std::fabs(check.signed_sum) < 0.9 * check.lhs;
    return check;
}

double sagitta_deflection_estimate(const PolygonOrbit& orbit, const PlanarCurve& curve,
                                   std::size_t j) {
    if (j < 1 || j + 1 >= orbit.size())
        throw std::out_of_range("sagitta estimate needs an interior vertex");
    double kappa = curve.curvature(orbit.params[j]);
    double s = orbit.chords[j];
    double theta = orbit.deflection_angles[j - 1];
    double sine = std::sin(theta);
    if (sine == 0.0) throw std::domain_error("sagitta estimate: vanishing angle");
    return kappa * s * s / sine;
}

ConvergenceReport integrator_order_study(const ForceLaw& law, const Vector3& s,
                                         const Vector3& r0, const Vector3& v0, double total_time,
                                         const std::vector<std::size_t>& n_values,
                                         const std::function<Vector3(double)>& exact,
                                         unsigned threads) {
    validate_grid(n_values, 3);

    ConvergenceReport report;
    report.study = "order";
    ImpulseTrajectory reference;
    std::size_t n_ref = 0;
    if (!exact) {
        n_ref = 4 * n_values.back();
        reference = integrate(r0, v0, law, s, total_time, n_ref);
    }

    report.n_values.resize(n_values.size());
    report.metric.resize(n_values.size());
    detail::parallel_for(n_values.size(), threads, [&](std::size_t i) {
        const std::size_t n = n_values[i];
        ImpulseTrajectory traj = integrate(r0, v0, law, s, total_time, n);
        double err = 0.0;
        if (exact) {
            for (std::size_t k = 0; k < traj.states.size(); ++k)
                err = std::max(err, (traj.states[k].r - exact(traj.time_of(k))).norm());
        } else if (traj.stride == 1 && reference.stride == 1 && n_ref % n == 0) {
            std::size_t q = n_ref / n;
            for (std::size_t k = 0; k < traj.states.size(); ++k)
                err = std::max(err, (traj.states[k].r - reference.states[k * q].r).norm());
        } else {
            err = (traj.states.back().r - reference.states.back().r).norm();
        }
        report.n_values[i] = static_cast<double>(n);
        report.metric[i] = err;
    });
    report.extrapolated_limit = richardson_limit(report.n_values, report.metric);
    fill_fit(report, report.n_values, report.metric);
    return report;
}

double distance_to_curve(const PlanarCurve& curve, const Vector3& point) {
    const CurveDomain& dom = curve.domain();
    const std::size_t n = 2048;
    double best = std::numeric_limits<double>::infinity();
    double bestu = dom.u_min;
    for (std::size_t i = 0; i <= n; ++i) {
        double u = dom.u_min + dom.span() * static_cast<double>(i) / static_cast<double>(n);
        double d = (curve.evaluate(u) - point).norm();
        if (d < best) { best = d; bestu = u; }
    }
    double h = dom.span() / static_cast<double>(n);
    double a = std::max(dom.u_min, bestu - h), b = std::min(dom.u_max, bestu + h);
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = (curve.evaluate(x1) - point).norm();
    double f2 = (curve.evaluate(x2) - point).norm();
    for (int it = 0; it < 100 && (b - a) > 1e-14 * std::max(1.0, dom.span()); ++it) {
        if (f1 > f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = (curve.evaluate(x2) - point).norm();
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = (curve.evaluate(x1) - point).norm();
        }
    }
    return std::min(best, std::min(f1, f2));
}

} // namespace polyorb
