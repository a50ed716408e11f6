#include "polyorb/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polyorb/errors.hpp"

namespace polyorb {

namespace {

void validate_coeff(double c, const char* what) {
    if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument(std::string(what) + ": coefficient must be non-negative");
}

// closest distance from s to the segment r -> r + w
double segment_distance(const Vector3& r, const Vector3& w, const Vector3& s) {
    double w2 = w.norm2();
    if (w2 == 0.0) return (r - s).norm();
    double t = (s - r).dot(w) / w2;
    t = std::clamp(t, 0.0, 1.0);
    return (r + w * t - s).norm();
}

} // namespace

ForceLaw ForceLaw::linear(double k) {
    validate_coeff(k, "linear force");
    return {Kind::Linear, k, 1.0};
}

ForceLaw ForceLaw::inverse_square(double gm) {
    validate_coeff(gm, "inverse-square force");
    return {Kind::InverseSquare, gm, -2.0};
}

ForceLaw ForceLaw::power(double a, double p) {
    validate_coeff(a, "power-law force");
    require_finite(p, "power-law exponent");
    return {Kind::PowerLaw, a, p};
}

Vector3 ForceLaw::acceleration(const Vector3& r, const Vector3& s) const {
    if (coeff == 0.0) return {0.0, 0.0, 0.0};
    Vector3 d = r - s;
    double d2 = d.norm2();
    if (d2 == 0.0) throw std::domain_error("force evaluated at the center");
    switch (kind) {
    case Kind::Linear:
        return d * -coeff;
    case Kind::InverseSquare:
        return d * (-coeff / (d2 * std::sqrt(d2)));
    case Kind::PowerLaw:
        return d * (-coeff * std::pow(d2, 0.5 * (exponent - 1.0)));
    }
    throw std::logic_error("unreachable force kind");
}

std::string to_string(ForceLaw::Kind k) {
    switch (k) {
    case ForceLaw::Kind::Linear: return "linear";
    case ForceLaw::Kind::InverseSquare: return "inverse-square";
    case ForceLaw::Kind::PowerLaw: return "power";
    }
    throw std::logic_error("unreachable force kind");
}

State step(const State& state, const ForceLaw& law, const Vector3& s, double dt,
           std::size_t step_index, double collision_radius) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("step size must be positive");
    Vector3 drift = state.v * dt;
    if (segment_distance(state.r, drift, s) < collision_radius)
        throw SingularityError("trajectory passed within the collision radius of the center",
                               step_index);
    State next;
    next.r = state.r + drift;
    next.v = state.v + law.acceleration(next.r, s) * dt;
    if (!next.r.finite() || !next.v.finite())
        throw NumericalError("integration produced non-finite state");
    return next;
}

ImpulseTrajectory integrate(const Vector3& r0, const Vector3& v0, const ForceLaw& law,
                            const Vector3& s, double total_time, std::size_t n,
                            const IntegrateOptions& options) {
    require_finite(r0, "initial position");
    require_finite(v0, "initial velocity");
    require_finite(s, "force center");
    if (n < 1) throw std::invalid_argument("need at least one step");
    if (!(total_time > 0.0) || !std::isfinite(total_time))
        throw std::invalid_argument("total time must be positive");
    if ((r0 - s).norm() <= options.collision_radius)
        throw SingularityError("initial position within the collision radius", 0);

    ImpulseTrajectory traj;
    traj.center = s;
    traj.law = law;
    traj.dt = total_time / static_cast<double>(n);
    traj.total_time = total_time;
    traj.n_steps = n;
    traj.stride = n <= options.store_limit
                      ? 1
                      : (n + options.store_limit - 1) / options.store_limit;

    State cur{r0, v0};
    Vector3 l0 = (r0 - s).cross(v0);
    double l0n = l0.norm();
    Vector3 plane_n = l0n > 0.0 ? l0 / l0n : Vector3{0.0, 0.0, 0.0};
    double l_denominator = l0n > 0.0 ? l0n : 1.0;
    double area0 = 0.0; // set from the first step
    traj.energy_initial = energy(cur, law, s);
    double e_denominator = std::fabs(traj.energy_initial) > 0.0 ? std::fabs(traj.energy_initial) : 1.0;

    traj.states.push_back(cur);
    traj.step_index.push_back(0);
    traj.angular_momenta.push_back(l0);

    bool cur_stored = true;
    for (std::size_t j = 0; j < n; ++j) {
        State nxt = step(cur, law, s, traj.dt, j, options.collision_radius);

        double area2 = (cur.r - s).cross(nxt.r - cur.r).norm();
        if (j == 0) area0 = area2;
        double a_den = area0 > 0.0 ? area0 : 1.0;
        traj.max_rel_area_spread =
            std::max(traj.max_rel_area_spread, std::fabs(area2 - area0) / a_den);
        if (cur_stored) traj.swept_areas2.push_back(area2);

        cur = nxt;
        std::size_t idx = j + 1;
        Vector3 l = (cur.r - s).cross(cur.v);
        traj.max_rel_momentum_drift =
            std::max(traj.max_rel_momentum_drift, (l - l0).norm() / l_denominator);
        traj.max_out_of_plane =
            std::max(traj.max_out_of_plane, std::fabs((cur.r - r0).dot(plane_n)));
        double e = energy(cur, law, s);
        traj.max_rel_energy_drift =
            std::max(traj.max_rel_energy_drift, std::fabs(e - traj.energy_initial) / e_denominator);
        if (idx == n) traj.energy_final = e;

        cur_stored = (idx % traj.stride == 0) || idx == n;
        if (cur_stored) {
            traj.states.push_back(cur);
            traj.step_index.push_back(idx);
            traj.angular_momenta.push_back(l);
        }
    }
    return traj;
}

Vector3 second_difference_deflection(const ImpulseTrajectory& trajectory, std::size_t j) {
    if (trajectory.stride != 1)
        throw std::invalid_argument("second difference requires an undecimated trajectory");
    if (j < 1 || j + 1 >= trajectory.states.size())
        throw std::out_of_range("second difference needs an interior step index");
    const Vector3& a = trajectory.states[j - 1].r;
    const Vector3& b = trajectory.states[j].r;
    const Vector3& c = trajectory.states[j + 1].r;
    return c + a - b * 2.0;
}

double energy(const State& state, const ForceLaw& law, const Vector3& s) {
    double kinetic = 0.5 * state.v.norm2();
    if (law.coeff == 0.0) return kinetic;
    double d = (state.r - s).norm();
    if (d == 0.0) throw std::domain_error("energy evaluated at the center");
    double p = law.exponent;
    double potential;
    if (p == -1.0) potential = law.coeff * std::log(d);
    else potential = law.coeff * std::pow(d, p + 1.0) / (p + 1.0);
    return kinetic + potential;
}

} // namespace polyorb
