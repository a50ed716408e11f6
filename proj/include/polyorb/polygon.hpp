#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyorb/curve.hpp"
#include "polyorb/vec3.hpp"

namespace polyorb {

enum class Termination { ReachedEndpoint, NoIntersection, RadialTangency, MaxSteps };

std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

/// Angular tolerance (radians) below which the radius counts as tangent to the curve.
inline constexpr double kTangencyTol = 1e-6;

struct NextVertex {
    double u = 0.0;
    Vector3 point;
    Vector3 deflection; // parallel to S - P_curr by construction
};

/// One construction step: extend the chord P_prev->P_curr past P_curr by its own
/// length to the point c, then intersect the line through c parallel to
/// S - P_curr with the curve. Returns the intersection with the smallest
/// positive parameter advance, or nullopt when the line misses the remaining
/// curve. Throws TangencyError when the radius at P_curr is tangent to the
/// curve within kTangencyTol.
std::optional<NextVertex> next_vertex(const PlanarCurve& curve, const ForceCenter& center,
                                      const Vector3& p_prev, const Vector3& p_curr,
                                      double u_curr);

/// Polygon inscribed in a plane curve by repeated chord extension and radial
/// deflection. Vertices P_0..P_{m-1} at parameters params[0..m-1];
/// chords[j] = |P_{j+1} - P_j|; deflections are stored at interior vertices
/// (deflections[k] belongs to vertex k+1) and are parallel to the radius there;
/// areas2[j] = |(P_j - S) x (P_{j+1} - S)|, twice the triangle area swept by
/// chord j about the force center.
struct PolygonOrbit {
    std::vector<double> params;
    std::vector<Vector3> vertices;
    std::vector<double> chords;
    std::vector<double> deflections;
    std::vector<Vector3> deflection_vectors;
    std::vector<double> deflection_angles; // vs the spanning chord P_{j-1}->P_{j+1}
    std::vector<double> areas2;
    Termination termination = Termination::NoIntersection;

    std::size_t size() const { return vertices.size(); }

    /// Chord growth increments e(j) = s(j+1) - s(j).
    std::vector<double> chord_increments() const;
};

/// Runs the construction from u_start with first chord length s1 until the
/// curve ends, the deflection line misses, a radial tangency is hit, or
/// max_steps chords have been placed. s1 == 0 yields the single-vertex orbit.
PolygonOrbit construct(const PlanarCurve& curve, const ForceCenter& center, double u_start,
                       double s1, std::size_t max_steps);

/// Total length of the polygon, sum of its chords.
double coverage_length(const PolygonOrbit& orbit);

} // namespace polyorb
