#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "json.hpp"
#include "polyorb/io.hpp"

using polyorb::ConvergenceReport;
using polyorb::ForceCenter;
using polyorb::ForceLaw;
using polyorb::ImpulseTrajectory;
using polyorb::PlanarCurve;
using polyorb::PolygonOrbit;
using polyorb::Vector3;
namespace io = polyorb::io;

namespace {
const double kPi = std::acos(-1.0);

PolygonOrbit sample_orbit() {
    PlanarCurve ell = PlanarCurve::ellipse_focus(1.0, 0.5);
    return polyorb::construct(ell, ForceCenter{Vector3{0.0, 0.0, 0.0}}, 0.3, 0.05, 20);
}

ImpulseTrajectory sample_trajectory() {
    return polyorb::integrate(Vector3{0.5, 0.0, 0.0}, Vector3{0.0, std::sqrt(3.0), 0.0},
                              ForceLaw::inverse_square(1.0), Vector3{0.0, 0.0, 0.0}, 1.0, 50);
}
} // namespace

TEST_SUITE("io") {

TEST_CASE("format_double is round-trip safe") {
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(-1e6, 1e6);
    for (int k = 0; k < 200; ++k) {
        double v = uni(rng) * std::pow(10.0, (k % 13) - 6);
        double back = std::strtod(io::format_double(v).c_str(), nullptr);
        CHECK(back == v);
    }
}

TEST_CASE("polygon orbit json round trip") {
    PolygonOrbit orbit = sample_orbit();
    std::string text = io::orbit_to_json(orbit);
    PolygonOrbit parsed = io::orbit_from_json(text);
    CHECK(io::orbit_to_json(parsed) == text); // byte-identical re-serialization

    REQUIRE(parsed.size() == orbit.size());
    for (std::size_t j = 0; j < orbit.size(); ++j) {
        CHECK(parsed.params[j] == orbit.params[j]);
        CHECK(parsed.vertices[j] == orbit.vertices[j]);
    }
    CHECK(parsed.chords == orbit.chords);
    CHECK(parsed.deflections == orbit.deflections);
    CHECK(parsed.deflection_angles == orbit.deflection_angles);
    CHECK(parsed.areas2 == orbit.areas2);
    CHECK(parsed.termination == orbit.termination);

    CHECK_THROWS_AS(io::orbit_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(io::orbit_from_json("{\"vertices\":[]}"), std::invalid_argument);
}

TEST_CASE("polygon orbit csv round trip") {
    PolygonOrbit orbit = sample_orbit();
    std::string text = io::orbit_to_csv(orbit);
    PolygonOrbit parsed = io::orbit_from_csv(text);
    CHECK(io::orbit_to_csv(parsed) == text);
    CHECK(parsed.params == orbit.params);
    CHECK(parsed.chords == orbit.chords);
    CHECK(parsed.deflections == orbit.deflections);
    CHECK(parsed.areas2 == orbit.areas2);
    for (std::size_t j = 0; j < orbit.size(); ++j) {
        CHECK(parsed.vertices[j] == orbit.vertices[j]);
    }

    CHECK_THROWS_AS(io::orbit_from_csv("a,b\n"), std::invalid_argument);
    CHECK_THROWS_AS(io::orbit_from_csv("j,u,x,y,z,chord,deflection,theta,area2\n1,2,3\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::orbit_from_csv("j,u,x,y,z,chord,deflection,theta,area2\n"
                                       "0,zero,0,0,0,,,,\n"),
                    std::invalid_argument);
}

TEST_CASE("trajectory json round trip") {
    ImpulseTrajectory traj = sample_trajectory();
    std::string text = io::trajectory_to_json(traj);
    ImpulseTrajectory parsed = io::trajectory_from_json(text);
    CHECK(io::trajectory_to_json(parsed) == text);

    REQUIRE(parsed.states.size() == traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        CHECK(parsed.states[k].r == traj.states[k].r);
        CHECK(parsed.states[k].v == traj.states[k].v);
        CHECK(parsed.angular_momenta[k] == traj.angular_momenta[k]);
    }
    CHECK(parsed.swept_areas2 == traj.swept_areas2);
    CHECK(parsed.dt == traj.dt);
    CHECK(parsed.n_steps == traj.n_steps);
    CHECK(parsed.stride == traj.stride);
    CHECK(parsed.law.kind == traj.law.kind);
    CHECK(parsed.law.coeff == traj.law.coeff);
    CHECK(parsed.max_rel_momentum_drift == traj.max_rel_momentum_drift);
    CHECK(parsed.energy_final == traj.energy_final);
}

TEST_CASE("trajectory csv round trip") {
    ImpulseTrajectory traj = sample_trajectory();
    std::string text = io::trajectory_to_csv(traj);
    ImpulseTrajectory parsed = io::trajectory_from_csv(text);
    CHECK(io::trajectory_to_csv(parsed) == text);
    CHECK(parsed.dt == traj.dt); // undecimated run: dt is read back exactly
    CHECK(parsed.step_index == traj.step_index);
    CHECK(parsed.swept_areas2 == traj.swept_areas2);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        CHECK(parsed.states[k].r == traj.states[k].r);
        CHECK(parsed.states[k].v == traj.states[k].v);
    }
    CHECK_THROWS_AS(io::trajectory_from_csv("t,x\n"), std::invalid_argument);
}

TEST_CASE("convergence report json round trip, generic shape") {
    ConvergenceReport report;
    report.study = "coverage";
    report.n_values = {8.0, 16.0, 32.0};
    report.metric = {0.25, 0.0625, 0.015625};
    report.log_log_slope = -2.0;
    report.slope_ci = 0.001;
    report.residual = 1e-9;
    report.extrapolated_limit = 6.28;
    report.fit_valid = true;
    report.dropped = 0;

    std::string text = io::report_to_json(report);
    ConvergenceReport parsed = io::report_from_json(text);
    CHECK(io::report_to_json(parsed) == text);
    CHECK(parsed.study == report.study);
    CHECK(parsed.metric == report.metric);
    CHECK(parsed.log_log_slope == report.log_log_slope);
    CHECK(parsed.fit_valid == report.fit_valid);

    std::string csv = io::report_to_csv(report);
    CHECK(csv.rfind("n,metric\n", 0) == 0);
    CHECK(csv.find("8,0.25\n") != std::string::npos);
}

TEST_CASE("convergence report json round trip, ratio shape") {
    ConvergenceReport report;
    report.study = "ratio";
    report.n_values = {8.0, 16.0, 32.0};
    report.metric = {2.1, 2.05, 2.025};
    report.log_log_slope = -1.0;
    report.residual = 1e-6;
    report.extrapolated_limit = 2.0;
    report.fit_valid = true;

    std::string text = io::report_to_json(report);
    CHECK(text.find("\"fit_order\"") != std::string::npos);
    CHECK(text.find("\"ratio\"") != std::string::npos);
    ConvergenceReport parsed = io::report_from_json(text);
    CHECK(io::report_to_json(parsed) == text);
    CHECK(parsed.log_log_slope == report.log_log_slope);

    report.fit_valid = false;
    std::string invalid_text = io::report_to_json(report);
    ConvergenceReport parsed2 = io::report_from_json(invalid_text);
    CHECK_FALSE(parsed2.fit_valid);
    CHECK(io::report_to_json(parsed2) == invalid_text);

    CHECK(io::report_to_csv(report).rfind("n,ratio\n", 0) == 0);
}

TEST_CASE("bound rows serialize to json and csv") {
    polyorb::BoundCheck row;
    row.lhs = 0.5;
    row.rhs = 1.0;
    row.margin = 1.5;
    row.max_curvature = 2.0;
    row.signed_sum = 0.4;
    row.satisfied = true;
    row.sign_flag = false;
    row.n_chords = 16;
    std::string text = io::bound_rows_to_json({16}, {row});
    auto doc = nlohmann::json::parse(text);
    CHECK(doc.at("all_satisfied").get<bool>());
    CHECK(doc.at("rows").size() == 1);
    CHECK(doc.at("rows")[0].at("lhs").get<double>() == 0.5);

    std::string csv = io::bound_rows_to_csv({16}, {row});
    CHECK(csv.rfind("n,lhs,rhs,margin,max_curvature,satisfied,sign_flag\n", 0) == 0);
    CHECK(csv.find("16,0.5,1,1.5,2,1,0\n") != std::string::npos);
}

TEST_CASE("curve csv ingestion") {
    std::string good = "u,x,y,z\n";
    for (int i = 0; i < 32; ++i) {
        double u = 2.0 * kPi * i / 31.0;
        good += io::format_double(u) + ',' + io::format_double(std::cos(u)) + ',' +
                io::format_double(std::sin(u)) + ",0\n";
    }
    PlanarCurve curve = io::read_curve_csv(good);
    CHECK(curve.kind() == polyorb::CurveKind::CustomSampled);
    CHECK((curve.evaluate(kPi) - Vector3{-1.0, 0.0, 0.0}).norm() < 1e-3);

    CHECK_THROWS_AS(io::read_curve_csv("x,y,z\n0,1,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(io::read_curve_csv("u,x,y,z\n0,1,0,0\n1,0,1,0\n2,-1,0,0\n"),
                    std::invalid_argument); // too few rows
    CHECK_THROWS_AS(io::read_curve_csv("u,x,y,z\n0,1,0,0\n1,0,1,0\n1,-1,0,0\n2,0,-1,0\n"),
                    std::invalid_argument); // non-increasing u
    CHECK_THROWS_AS(io::read_curve_csv("u,x,y,z\n0,1,0,0\nbad,0,1,0\n2,-1,0,0\n3,0,-1,0\n"),
                    std::invalid_argument);
}

TEST_CASE("file helpers") {
    const std::string path = "io_test_scratch.txt";
    io::write_file(path, "alpha\nbeta\n");
    CHECK(io::read_file(path) == "alpha\nbeta\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(io::read_file("definitely_missing_file.xyz"), std::invalid_argument);
}

} // TEST_SUITE
