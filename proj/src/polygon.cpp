#include "polyorb/polygon.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "polyorb/errors.hpp"
#include "polyorb/rootfind.hpp"

namespace polyorb {

namespace {

constexpr std::size_t kMarchLimit = 1000000;

double sin_radius_tangent(const PlanarCurve& curve, const Vector3& s, double u,
                          const Vector3& p) {
    Vector3 g = s - p;
    double gn = g.norm();
    if (gn < 1e-12 * curve.scale())
        throw std::invalid_argument("vertex coincides with the force center");
    return curve.tangent(u).cross(g / gn).norm();
}

// right angle is reported for a vanishing deflection (straight-line limit)
double spanning_chord_angle(const Vector3& deflection, const Vector3& spanning) {
    double dn = deflection.norm(), sn = spanning.norm();
    if (dn == 0.0 || sn == 0.0) return 1.5707963267948966;
    double cosv = deflection.dot(spanning) / (dn * sn);
    double sinv = deflection.cross(spanning).norm() / (dn * sn);
    return std::atan2(sinv, cosv);
}

} // namespace

std::string to_string(Termination t) {
    switch (t) {
    case Termination::ReachedEndpoint: return "reached_endpoint";
    case Termination::NoIntersection: return "no_intersection";
    case Termination::RadialTangency: return "radial_tangency";
    case Termination::MaxSteps: return "max_steps";
    }
    throw std::logic_error("unreachable termination value");
}

Termination termination_from_string(const std::string& s) {
    if (s == "reached_endpoint") return Termination::ReachedEndpoint;
    if (s == "no_intersection") return Termination::NoIntersection;
    if (s == "radial_tangency") return Termination::RadialTangency;
    if (s == "max_steps") return Termination::MaxSteps;
    throw std::invalid_argument("unknown termination: " + s);
}

std::vector<double> PolygonOrbit::chord_increments() const {
    std::vector<double> e;
    if (chords.size() >= 2) {
        e.reserve(chords.size() - 1);
        for (std::size_t j = 0; j + 1 < chords.size(); ++j)
            e.push_back(chords[j + 1] - chords[j]);
    }
    return e;
}

std::optional<NextVertex> next_vertex(const PlanarCurve& curve, const ForceCenter& center,
                                      const Vector3& p_prev, const Vector3& p_curr,
                                      double u_curr) {
    require_finite(p_prev, "previous vertex");
    require_finite(p_curr, "current vertex");

    const Vector3 s = center.position;
    Vector3 radius = s - p_curr;
    double rn = radius.norm();
    if (rn < 1e-12 * curve.scale())
        throw std::invalid_argument("vertex coincides with the force center");
    Vector3 ghat = radius / rn;

    if (curve.tangent(u_curr).cross(ghat).norm() < kTangencyTol)
        throw TangencyError("radius is tangent to the curve at the current vertex");

    Vector3 chord = p_curr - p_prev;
    double chord_len = chord.norm();
    if (chord_len == 0.0)
        throw std::invalid_argument("coincident construction vertices");

    Vector3 c = p_curr + chord;
    Vector3 nhat = curve.frame().normal;
    auto f = [&](double w) { return (curve.evaluate(w) - c).cross(ghat).dot(nhat); };

    double f0 = f(u_curr);
    if (std::fabs(f0) < 1e-14 * curve.scale())
        throw NumericalError("degenerate configuration: chord passes through the force center");

    double speed = curve.derivative(u_curr).norm();
    double du_est = chord_len / std::max(speed, 1e-300);
    double h = du_est / 4.0;
    const double u_max = curve.domain().u_max;
    if (u_curr >= u_max) return std::nullopt;

    double w_prev = u_curr, f_prev = f0;
    for (std::size_t k = 0; k < kMarchLimit; ++k) {
        double w = w_prev + h;
        if (w > u_max) w = u_max;
        double fw = f(w);
        if (!std::isfinite(fw))
            throw NumericalError("intersection search: non-finite curve evaluation");
        if (fw == 0.0 || (fw > 0.0) != (f_prev > 0.0)) {
            double u_next = detail::bisect_secant(f, w_prev, w, 1e-14);
            Vector3 p_next = curve.evaluate(u_next);
            double t = (p_next - c).dot(ghat);
            return NextVertex{u_next, p_next, ghat * t};
        }
        if (w >= u_max) {
            // an intersection sitting exactly on the endpoint never brackets;
            // accept it when the line residual is at rounding level
            if (std::fabs(fw) <= 1e-10 * curve.scale()) {
                Vector3 p_next = curve.evaluate(u_max);
                double t = (p_next - c).dot(ghat);
                return NextVertex{u_max, p_next, ghat * t};
            }
            return std::nullopt;
        }
        w_prev = w;
        f_prev = fw;
    }
    throw NumericalError("intersection search exceeded the march limit");
}

PolygonOrbit construct(const PlanarCurve& curve, const ForceCenter& center, double u_start,
                       double s1, std::size_t max_steps) {
    validate_center(curve, center);
    require_finite(s1, "first chord length");
    if (s1 < 0.0) throw std::invalid_argument("first chord length must be non-negative");

    PolygonOrbit orbit;
    const Vector3 s = center.position;
    Vector3 p0 = curve.evaluate(u_start);
    orbit.params.push_back(u_start);
    orbit.vertices.push_back(p0);
    if (s1 == 0.0) {
        orbit.termination = Termination::ReachedEndpoint;
        return orbit;
    }

    if (sin_radius_tangent(curve, s, u_start, p0) < kTangencyTol) {
        orbit.termination = Termination::RadialTangency;
        return orbit;
    }

    const CurveDomain dom = curve.domain();
    const double endpoint_tol = 1e-9 * std::max(1.0, dom.span());

    // place the first chord: the forward curve point at straight-line distance s1
    {
        auto g = [&](double w) { return (curve.evaluate(w) - p0).norm() - s1; };
        double speed = curve.derivative(u_start).norm();
        double h = s1 / std::max(speed, 1e-300) / 4.0;
        double w_prev = u_start, g_prev = -s1;
        bool found = false;
        for (std::size_t k = 0; k < kMarchLimit && !found; ++k) {
            double w = w_prev + h;
            if (w > dom.u_max) w = dom.u_max;
            double gw = g(w);
            if (!std::isfinite(gw))
                throw NumericalError("first chord search: non-finite curve evaluation");
            bool hit = false;
            double u1 = 0.0;
            if (gw == 0.0 || (gw > 0.0) != (g_prev > 0.0)) {
                u1 = detail::bisect_secant(g, w_prev, w, 1e-14);
                hit = true;
            } else if (w >= dom.u_max && std::fabs(gw) <= 1e-10 * curve.scale()) {
                u1 = dom.u_max; // first chord ends exactly on the endpoint
                hit = true;
            }
            if (hit) {
                Vector3 p1 = curve.evaluate(u1);
                orbit.params.push_back(u1);
                orbit.vertices.push_back(p1);
                orbit.chords.push_back((p1 - p0).norm());
                orbit.areas2.push_back(triangle_area2(s, p0, p1));
                found = true;
                break;
            }
            if (w >= dom.u_max) break;
            w_prev = w;
            g_prev = gw;
        }
        if (!found) {
            orbit.termination = Termination::NoIntersection;
            return orbit;
        }
    }

    while (true) {
        std::size_t m = orbit.vertices.size();
        double u_curr = orbit.params[m - 1];
        const Vector3& p_curr = orbit.vertices[m - 1];

        if (sin_radius_tangent(curve, s, u_curr, p_curr) < kTangencyTol) {
            orbit.termination = Termination::RadialTangency;
            return orbit;
        }
        if (u_curr >= dom.u_max - endpoint_tol) {
            orbit.termination = Termination::ReachedEndpoint;
            return orbit;
        }
        if (orbit.chords.size() >= max_steps) {
            orbit.termination = Termination::MaxSteps;
            return orbit;
        }

        auto step = next_vertex(curve, center, orbit.vertices[m - 2], p_curr, u_curr);
        if (!step) {
            orbit.termination = Termination::NoIntersection;
            return orbit;
        }

        orbit.params.push_back(step->u);
        orbit.vertices.push_back(step->point);
        orbit.chords.push_back((step->point - p_curr).norm());
        orbit.areas2.push_back(triangle_area2(s, p_curr, step->point));
        orbit.deflections.push_back(step->deflection.norm());
        orbit.deflection_vectors.push_back(step->deflection);
        orbit.deflection_angles.push_back(
            spanning_chord_angle(step->deflection, step->point - orbit.vertices[m - 2]));
    }
}

double coverage_length(const PolygonOrbit& orbit) {
    double total = 0.0;
    for (double sj : orbit.chords) total += sj;
    return total;
}

} // namespace polyorb
