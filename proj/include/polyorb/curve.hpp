#pragma once

#include <vector>

#include "polyorb/vec3.hpp"

namespace polyorb {

/// Right-handed orthonormal frame of the curve's plane: normal = e1 × e2.
struct PlaneFrame {
    Vector3 origin{0.0, 0.0, 0.0};
    Vector3 e1{1.0, 0.0, 0.0};
    Vector3 e2{0.0, 1.0, 0.0};
    Vector3 normal{0.0, 0.0, 1.0};

    /// Frame with the given origin and plane normal; in-plane axes are chosen
    /// deterministically (e1 from the world axis least aligned with the normal).
    static PlaneFrame from_normal(const Vector3& origin, const Vector3& normal);

    /// Frame from explicit in-plane axes (orthonormalized, normal = e1 × e2).
    static PlaneFrame from_axes(const Vector3& origin, const Vector3& e1, const Vector3& e2);

    Vector3 point(double px, double py) const { return origin + e1 * px + e2 * py; }
    Vector3 direction(double px, double py) const { return e1 * px + e2 * py; }
};

struct CurveDomain {
    double u_min = 0.0;
    double u_max = 0.0;
    double span() const { return u_max - u_min; }
};

enum class CurveKind { Circle, EllipseCenter, EllipseFocus, CustomSampled };

/// Smooth plane curve R(u) with analytic first and second parameter derivatives.
/// Parameterization is counter-clockwise in the frame (increasing u advances
/// along e1 → e2) for all built-in kinds.
class PlanarCurve {
public:
    static PlanarCurve circle(double radius, const PlaneFrame& frame = {},
                              const CurveDomain* domain = nullptr);

    /// Ellipse with semi-axes a (along e1) and b (along e2), center at the frame origin.
    static PlanarCurve ellipse_center(double a, double b, const PlaneFrame& frame = {},
                                      const CurveDomain* domain = nullptr);

    /// Ellipse with semi-major axis a and eccentricity e, one focus at the frame
    /// origin; u is the polar angle about that focus, u = 0 at closest approach.
    static PlanarCurve ellipse_focus(double a, double e, const PlaneFrame& frame = {},
                                     const CurveDomain* domain = nullptr);

    /// Curve interpolating sampled points (piecewise 4-point cubic). Requires at
    /// least 4 samples, strictly increasing u, coplanar points.
    static PlanarCurve sampled(const std::vector<double>& u, const std::vector<Vector3>& points);

    Vector3 evaluate(double u) const;
    Vector3 derivative(double u) const;
    Vector3 second_derivative(double u) const;

    /// Unit tangent dR/du / |dR/du|; throws std::domain_error when the
    /// parameterization is degenerate (|dR/du| vanishes).
    Vector3 tangent(double u) const;

    /// |R' × R''| / |R'|^3.
    double curvature(double u) const;

    CurveKind kind() const { return kind_; }
    const PlaneFrame& frame() const { return frame_; }
    const CurveDomain& domain() const { return domain_; }

    /// Characteristic length used to scale tolerances (max extent, at least 1).
    double scale() const { return scale_; }

    /// Arc length between parameters (u0 <= u1), Gauss-Legendre quadrature.
    double arc_length(double u0, double u1) const;

    /// Parameter w with signed arc length arc from u0 (negative arc walks
    /// backward), solved to 1e-13 of the parameter span.
    double u_at_arc(double u0, double arc) const;

    /// Straight-line distance between R(u0) and the point one signed arc
    /// length further on.
    double chord_for_arc(double u0, double arc) const;

    /// Max curvature over [u0, u1], dense sampling plus local refinement.
    double max_curvature(double u0, double u1) const;

private:
    PlanarCurve() = default;
    void check_domain(double u) const;
    void local2d(double u, double& x, double& y, double& dx, double& dy,
                 double& ddx, double& ddy) const;

    CurveKind kind_ = CurveKind::Circle;
    PlaneFrame frame_;
    CurveDomain domain_{0.0, 0.0};
    double scale_ = 1.0;

    // circle / ellipse parameters
    double pa_ = 1.0; // radius | semi-axis a | semi-major a
    double pb_ = 1.0; // semi-axis b | eccentricity e

    // sampled-curve data (in-plane coordinates at knots)
    std::vector<double> knots_;
    std::vector<double> sx_, sy_;
};

struct ForceCenter {
    Vector3 position{0.0, 0.0, 0.0};
};

/// Checks that S lies in the curve's plane and not on the curve itself.
/// Throws std::invalid_argument otherwise.
void validate_center(const PlanarCurve& curve, const ForceCenter& center);

} // namespace polyorb
