#include "polyorb/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "polyorb/errors.hpp"
#include "polyorb/parallel.hpp"

namespace polyorb {

double prop1_measure(const PolygonOrbit& orbit, std::size_t j) {
    if (j < 1 || j + 1 >= orbit.size())
        throw std::out_of_range("polygon measure needs an interior vertex");
    double d = orbit.deflections[j - 1];
    double a2 = orbit.areas2[j];
    if (a2 == 0.0) throw std::domain_error("degenerate triangle in polygon measure");
    return d / (a2 * a2);
}

double prop6_measure(const PlanarCurve& curve, const ForceCenter& center, double u, double h) {
    if (h == 0.0) throw std::invalid_argument("arc offset must be non-zero");
    Vector3 p = curve.evaluate(u);
    Vector3 sp = center.position - p;
    double spn = sp.norm();
    if (spn < 1e-12 * curve.scale())
        throw std::invalid_argument("measure point coincides with the force center");
    Vector3 ghat = sp / spn;
    Vector3 that = curve.tangent(u);
    Vector3 nhat = curve.frame().normal;

    double denom = ghat.cross(that).dot(nhat);
    if (std::fabs(denom) < kTangencyTol)
        throw TangencyError("radius is tangent to the curve at the measure point");

    Vector3 q = curve.evaluate(curve.u_at_arc(u, h));

    // R on the tangent line through P, reached from Q along +-ghat
    double lambda = (p - q).cross(that).dot(nhat) / denom;
    double qr = std::fabs(lambda);

    double qt = (q - center.position).cross(ghat).norm();
    if (qt == 0.0) throw std::domain_error("offset point lies on the line through the center");
    return qr / (spn * qt * spn * qt);
}

double prop6_extrapolated(const PlanarCurve& curve, const ForceCenter& center, double u,
                          double h0) {
    std::vector<double> grid = {1.0, 2.0, 4.0};
    std::vector<double> vals = {prop6_measure(curve, center, u, h0),
                                prop6_measure(curve, center, u, h0 / 2.0),
                                prop6_measure(curve, center, u, h0 / 4.0)};
    return richardson_limit(grid, vals);
}

ConvergenceReport ratio_convergence(const PlanarCurve& curve, const ForceCenter& center,
                                    double u, const std::vector<std::size_t>& n_values,
                                    double local_arc, double h0, unsigned threads) {
    if (n_values.size() < 3)
        throw std::invalid_argument("ratio study needs at least 3 grid sizes");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1])
            throw std::invalid_argument("grid sizes must be strictly increasing");
    if (!(local_arc > 0.0) || !(h0 > 0.0))
        throw std::invalid_argument("local arc and offset must be positive");

    ConvergenceReport report;
    report.study = "ratio";
    report.n_values.resize(n_values.size());
    report.metric.resize(n_values.size());
    detail::parallel_for(n_values.size(), threads, [&](std::size_t i) {
        double arc = local_arc / static_cast<double>(n_values[i]);
        double s1 = curve.chord_for_arc(u, arc);
        PolygonOrbit orbit = construct(curve, center, u, s1, 3);
        if (orbit.size() < 3)
            throw NumericalError("local polygon for the ratio study has too few vertices");
        double p1 = prop1_measure(orbit, 1);
        double p6 = prop6_extrapolated(curve, center, orbit.params[1], h0);
        report.n_values[i] = static_cast<double>(n_values[i]);
        report.metric[i] = p1 / p6;
    });
    report.extrapolated_limit = richardson_limit(report.n_values, report.metric);

    std::vector<double> deviations;
    deviations.reserve(report.metric.size());
    for (double r : report.metric) deviations.push_back(std::fabs(r - report.extrapolated_limit));
    try {
        FitResult fit = fit_order(report.n_values, deviations);
        report.log_log_slope = fit.slope;
        report.slope_ci = fit.slope_ci;
        report.residual = fit.residual_rms;
        report.dropped = fit.dropped;
        report.fit_valid = true;
    } catch (const std::invalid_argument&) {
        report.fit_valid = false;
    }
    return report;
}

} // namespace polyorb
