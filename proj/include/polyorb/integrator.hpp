#pragma once

#include <string>
#include <vector>

#include "polyorb/vec3.hpp"

namespace polyorb {

/// Central attractive force toward a fixed point S. Acceleration magnitude is
/// coeff * |r - S|^exponent (Linear: exponent 1, InverseSquare: exponent -2).
/// coeff == 0 gives free inertial motion. Exponents <= -3 make trajectories
/// that approach the center diverge too fast for the construction; they are
/// accepted but should be used only away from the center.
struct ForceLaw {
    enum class Kind { Linear, InverseSquare, PowerLaw };

    Kind kind = Kind::Linear;
    double coeff = 1.0;
    double exponent = 1.0;

    static ForceLaw linear(double k);
    static ForceLaw inverse_square(double gm);
    static ForceLaw power(double a, double p);

    /// -coeff * |r-S|^(exponent-1) * (r-S); throws std::domain_error at r == S.
    Vector3 acceleration(const Vector3& r, const Vector3& s) const;
};

std::string to_string(ForceLaw::Kind k);

struct State {
    Vector3 r;
    Vector3 v;
};

struct IntegrateOptions {
    /// Stored states are decimated to at most this many (plus the final state);
    /// conservation diagnostics still cover every step.
    std::size_t store_limit = 1000000;
    /// A step whose drift segment passes within this distance of the center is
    /// a collision (SingularityError).
    double collision_radius = 1e-9;
};

/// Drift-then-kick trajectory: r_{j+1} = r_j + v_j dt, then the velocity kick
/// is evaluated at the new position and directed along S - r_{j+1}. This exact
/// ordering makes (r_{j+1} - S) x v_{j+1} equal to (r_j - S) x v_j identically,
/// so the discrete angular momentum about S, the per-step swept areas, and the
/// motion's plane are conserved to rounding.
struct ImpulseTrajectory {
    std::vector<State> states;             // stored states, j = 0 first, j = n last
    std::vector<std::size_t> step_index;   // original step index of each stored state
    std::vector<Vector3> angular_momenta;  // (r_j - S) x v_j at stored states
    std::vector<double> swept_areas2;      // |(r_j - S) x (r_{j+1} - r_j)| leaving stored state
    Vector3 center;
    ForceLaw law;
    double dt = 0.0;
    double total_time = 0.0;
    std::size_t n_steps = 0;
    std::size_t stride = 1;

    // diagnostics accumulated over every step regardless of decimation
    double max_rel_momentum_drift = 0.0;  // max_j |L_j - L_0| / |L_0|
    double max_rel_area_spread = 0.0;     // max_j |area2_j - area2_0| / area2_0
    double max_out_of_plane = 0.0;        // max_j |(r_j - r_0) . normalized(L_0)|
    double energy_initial = 0.0;          // diagnostic only, not a bound
    double energy_final = 0.0;
    double max_rel_energy_drift = 0.0;

    double time_of(std::size_t k) const { return static_cast<double>(step_index[k]) * dt; }
};

/// One drift-kick step; step_index only labels a possible SingularityError.
State step(const State& state, const ForceLaw& law, const Vector3& s, double dt,
           std::size_t step_index = 0, double collision_radius = 1e-9);

ImpulseTrajectory integrate(const Vector3& r0, const Vector3& v0, const ForceLaw& law,
                            const Vector3& s, double total_time, std::size_t n,
                            const IntegrateOptions& options = {});

/// r_{j+1} + r_{j-1} - 2 r_j for 1 <= j <= n-1; equals a(r_j) dt^2 exactly in
/// exact arithmetic, hence parallel to S - r_j. Requires an undecimated
/// trajectory (stride 1).
Vector3 second_difference_deflection(const ImpulseTrajectory& trajectory, std::size_t j);

/// Kinetic plus potential energy of the state (potential of the power law).
double energy(const State& state, const ForceLaw& law, const Vector3& s);

} // namespace polyorb
