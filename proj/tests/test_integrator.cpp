#include "doctest.h"

#include <cmath>

#include "polyorb/errors.hpp"
#include "polyorb/integrator.hpp"

using polyorb::ForceLaw;
using polyorb::ImpulseTrajectory;
using polyorb::IntegrateOptions;
using polyorb::State;
using polyorb::Vector3;

namespace {
const double kPi = std::acos(-1.0);
const Vector3 kOrigin{0.0, 0.0, 0.0};

Vector3 rotate(const Vector3& v, const Vector3& axis_raw, double angle) {
    Vector3 axis = axis_raw.normalized();
    return v * std::cos(angle) + axis.cross(v) * std::sin(angle) +
           axis * (axis.dot(v) * (1.0 - std::cos(angle)));
}
} // namespace

TEST_SUITE("integrator") {

TEST_CASE("force law factories and validation") {
    ForceLaw lin = ForceLaw::linear(2.0);
    CHECK(lin.exponent == 1.0);
    CHECK((lin.acceleration(Vector3{0.5, 0.0, 0.0}, kOrigin) -
           Vector3{-1.0, 0.0, 0.0})
              .norm() < 1e-15);

    ForceLaw inv = ForceLaw::inverse_square(4.0);
    CHECK(inv.exponent == -2.0);
    CHECK((inv.acceleration(Vector3{2.0, 0.0, 0.0}, kOrigin) -
           Vector3{-1.0, 0.0, 0.0})
              .norm() < 1e-15);

    ForceLaw pow5 = ForceLaw::power(3.0, -5.0);
    CHECK(pow5.acceleration(Vector3{0.0, 2.0, 0.0}, kOrigin).norm() ==
          doctest::Approx(3.0 / 32.0).epsilon(1e-14));

    ForceLaw free = ForceLaw::power(0.0, -2.0);
    CHECK(free.acceleration(Vector3{0.3, 0.1, 0.0}, kOrigin).norm() == 0.0);

    CHECK_THROWS_AS(ForceLaw::linear(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ForceLaw::inverse_square(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(lin.acceleration(kOrigin, kOrigin), std::domain_error);
}

TEST_CASE("single drift-kick step against a frozen value") {
    State s{Vector3{1.0, 0.0, 0.0}, Vector3{0.0, 1.0, 0.0}};
    State out = polyorb::step(s, ForceLaw::inverse_square(1.0), kOrigin, 0.1);
    CHECK(out.r.x == 1.0); // drift is exact here
    CHECK(out.r.y == 0.1);
    CHECK(out.r.z == 0.0);
    CHECK(out.v.x == doctest::Approx(-0.09851853368415734).epsilon(1e-14));
    CHECK(out.v.y == doctest::Approx(0.99014814663158427).epsilon(1e-14));
    CHECK(out.v.z == 0.0);
    CHECK_THROWS_AS(polyorb::step(s, ForceLaw::linear(1.0), kOrigin, 0.0),
                    std::invalid_argument);
}

TEST_CASE("zero coefficient gives free inertial motion") {
    ImpulseTrajectory t = polyorb::integrate(Vector3{1.0, 0.0, 0.0}, Vector3{0.0, 0.25, 0.0},
                                             ForceLaw::power(0.0, -2.0), kOrigin, 4.0, 16);
    REQUIRE(t.states.size() == 17);
    for (const State& s : t.states) {
        CHECK(s.v == Vector3{0.0, 0.25, 0.0});
    }
    CHECK(t.max_rel_momentum_drift == 0.0);
    CHECK((t.states.back().r - Vector3{1.0, 1.0, 0.0}).norm() < 1e-14);
}

TEST_CASE("discrete conservation on a Kepler orbit") {
    // e = 0.5 bound orbit of unit gravitational parameter, period 2*pi
    Vector3 r0{0.5, 0.0, 0.0};
    Vector3 v0{0.0, std::sqrt(3.0), 0.0};
    ImpulseTrajectory t =
        polyorb::integrate(r0, v0, ForceLaw::inverse_square(1.0), kOrigin, 2.0 * kPi, 5000);
    CHECK(t.max_rel_momentum_drift <= 1e-12);
    CHECK(t.max_rel_area_spread <= 1e-12);
    CHECK(t.max_out_of_plane == 0.0); // planar start stays planar bit-for-bit
    Vector3 l0 = t.angular_momenta.front();
    CHECK(l0.z == doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-15));
    for (const Vector3& l : t.angular_momenta) {
        CHECK((l - l0).norm() <= 1e-12 * l0.norm());
    }
}

TEST_CASE("tilted three-dimensional start stays in its plane") {
    Vector3 axis{1.0, 1.0, 1.0};
    Vector3 s{0.3, -0.2, 0.1};
    Vector3 r0 = s + rotate(Vector3{0.5, 0.0, 0.0}, axis, 0.7);
    Vector3 v0 = rotate(Vector3{0.0, std::sqrt(3.0), 0.0}, axis, 0.7);
    ImpulseTrajectory t =
        polyorb::integrate(r0, v0, ForceLaw::inverse_square(1.0), s, 2.0 * kPi, 4000);
    CHECK(t.max_out_of_plane <= 1e-11);
    CHECK(t.max_rel_momentum_drift <= 1e-12);
    CHECK(t.max_rel_area_spread <= 1e-12);
}

TEST_CASE("second differences point at the center with the exact magnitude") {
    // linear law: acceleration is -r, so the deflection must equal -r * dt^2
    Vector3 r0{1.0, 0.0, 0.0};
    Vector3 v0{0.0, 0.5, 0.0};
    std::size_t n = 64;
    ImpulseTrajectory t = polyorb::integrate(r0, v0, ForceLaw::linear(1.0), kOrigin, 1.0, n);
    REQUIRE(t.stride == 1);
    const double dt2 = t.dt * t.dt;
    for (std::size_t j = 1; j < n; ++j) {
        Vector3 d = polyorb::second_difference_deflection(t, j);
        Vector3 expect = -dt2 * t.states[j].r;
        CHECK((d - expect).norm() <= 1e-10 * dt2);
        CHECK(d.normalized().cross((kOrigin - t.states[j].r).normalized()).norm() <= 1e-10);
    }
    CHECK_THROWS_AS(polyorb::second_difference_deflection(t, 0), std::out_of_range);
    CHECK_THROWS_AS(polyorb::second_difference_deflection(t, n), std::out_of_range);
}

TEST_CASE("head-on trajectory raises a singularity error") {
    try {
        polyorb::integrate(Vector3{1.0, 0.0, 0.0}, Vector3{-1.0, 0.0, 0.0},
                           ForceLaw::inverse_square(1.0), kOrigin, 2.0, 100);
        FAIL("expected SingularityError");
    } catch (const polyorb::SingularityError& e) {
        CHECK(e.step() > 0);
        CHECK(e.step() < 100);
    }
    CHECK_THROWS_AS(polyorb::integrate(Vector3{0.0, 0.0, 0.0}, Vector3{1.0, 0.0, 0.0},
                                       ForceLaw::linear(1.0), kOrigin, 1.0, 10),
                    polyorb::SingularityError);
}

TEST_CASE("stored states can be decimated without losing diagnostics") {
    IntegrateOptions opt;
    opt.store_limit = 100;
    ImpulseTrajectory t = polyorb::integrate(Vector3{0.5, 0.0, 0.0},
                                             Vector3{0.0, std::sqrt(3.0), 0.0},
                                             ForceLaw::inverse_square(1.0), kOrigin, 2.0 * kPi,
                                             1000, opt);
    CHECK(t.stride == 10);
    CHECK(t.states.size() == 101);
    CHECK(t.step_index.front() == 0);
    CHECK(t.step_index.back() == 1000);
    CHECK(t.swept_areas2.size() == t.states.size() - 1);
    CHECK(t.max_rel_momentum_drift <= 1e-12); // diagnostics still cover every step
    CHECK(t.time_of(t.states.size() - 1) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
}

TEST_CASE("linear-law trajectory tracks the exact ellipse at first order") {
    Vector3 r0{1.0, 0.0, 0.0};
    Vector3 v0{0.0, 0.5, 0.0};
    std::size_t n = 20000;
    ImpulseTrajectory t = polyorb::integrate(r0, v0, ForceLaw::linear(1.0), kOrigin,
                                             2.0 * kPi, n, IntegrateOptions{.store_limit = 200});
    Vector3 exact{std::cos(2.0 * kPi), 0.5 * std::sin(2.0 * kPi), 0.0};
    double err = (t.states.back().r - exact).norm();
    CHECK(err < 1e-2);
    CHECK(err > 1e-8); // honest first-order method, not exact
    CHECK(t.max_rel_energy_drift < 0.05);
    CHECK(t.energy_initial == doctest::Approx(polyorb::energy(State{r0, v0},
                                                              ForceLaw::linear(1.0), kOrigin))
                                  .epsilon(1e-15));
}

TEST_CASE("energy helper covers the logarithmic special case") {
    State s{Vector3{2.0, 0.0, 0.0}, Vector3{0.0, 1.0, 0.0}};
    // exponent -1: potential is coeff * ln |r - S|
    double e = polyorb::energy(s, ForceLaw::power(3.0, -1.0), kOrigin);
    CHECK(e == doctest::Approx(0.5 + 3.0 * std::log(2.0)).epsilon(1e-14));
    double e2 = polyorb::energy(s, ForceLaw::inverse_square(1.0), kOrigin);
    CHECK(e2 == doctest::Approx(0.5 - 0.5).epsilon(1e-14));
    CHECK_THROWS_AS(polyorb::energy(State{kOrigin, kOrigin}, ForceLaw::linear(1.0), kOrigin),
                    std::domain_error);
}

TEST_CASE("input validation") {
    Vector3 r0{1.0, 0.0, 0.0}, v0{0.0, 1.0, 0.0};
    ForceLaw law = ForceLaw::linear(1.0);
    CHECK_THROWS_AS(polyorb::integrate(r0, v0, law, kOrigin, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(polyorb::integrate(r0, v0, law, kOrigin, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(polyorb::integrate(r0, v0, law, kOrigin, -1.0, 10), std::invalid_argument);
}

} // TEST_SUITE
