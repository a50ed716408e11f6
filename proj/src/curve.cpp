#include "polyorb/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "polyorb/errors.hpp"

namespace polyorb {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 4> kGlx = {0.1834346424956498, 0.5255324099163290,
                                        0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlw = {0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

struct Cubic {
    // Newton form on 4 nodes: c0 + c1(u-t0) + c2(u-t0)(u-t1) + c3(u-t0)(u-t1)(u-t2)
    double t0, t1, t2;
    double c0, c1, c2, c3;

    static Cubic fit(const double* t, const double* f) {
        double d01 = (f[1] - f[0]) / (t[1] - t[0]);
        double d12 = (f[2] - f[1]) / (t[2] - t[1]);
        double d23 = (f[3] - f[2]) / (t[3] - t[2]);
        double d012 = (d12 - d01) / (t[2] - t[0]);
        double d123 = (d23 - d12) / (t[3] - t[1]);
        double d0123 = (d123 - d012) / (t[3] - t[0]);
        return {t[0], t[1], t[2], f[0], d01, d012, d0123};
    }

    double value(double u) const {
        double a = u - t0, b = u - t1, c = u - t2;
        return c0 + c1 * a + c2 * a * b + c3 * a * b * c;
    }
    double deriv(double u) const {
        double a = u - t0, b = u - t1, c = u - t2;
        return c1 + c2 * (a + b) + c3 * (a * b + a * c + b * c);
    }
    double deriv2(double u) const {
        double a = u - t0, b = u - t1, c = u - t2;
        return 2.0 * c2 + 2.0 * c3 * (a + b + c);
    }
};

} // namespace

PlaneFrame PlaneFrame::from_normal(const Vector3& origin, const Vector3& normal) {
    Vector3 n = normal.normalized();
    // seed e1 from the world axis least aligned with n
    Vector3 seed{1.0, 0.0, 0.0};
    double ax = std::fabs(n.x), ay = std::fabs(n.y), az = std::fabs(n.z);
    if (ay <= ax && ay <= az) seed = {0.0, 1.0, 0.0};
    else if (az <= ax && az <= ay) seed = {0.0, 0.0, 1.0};
    Vector3 e1 = (seed - n * n.dot(seed)).normalized();
    Vector3 e2 = n.cross(e1);
    return {origin, e1, e2, n};
}

PlaneFrame PlaneFrame::from_axes(const Vector3& origin, const Vector3& e1, const Vector3& e2) {
    Vector3 a = e1.normalized();
    Vector3 b = (e2 - a * a.dot(e2));
    double bn = b.norm();
    if (bn == 0.0) throw std::invalid_argument("plane frame: axes are collinear");
    b = b / bn;
    return {origin, a, b, a.cross(b)};
}

PlanarCurve PlanarCurve::circle(double radius, const PlaneFrame& frame,
                                const CurveDomain* domain) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("circle: radius must be positive");
    PlanarCurve c;
    c.kind_ = CurveKind::Circle;
    c.frame_ = frame;
    c.domain_ = domain ? *domain : CurveDomain{0.0, kTwoPi};
    c.pa_ = radius;
    c.scale_ = std::max(1.0, radius);
    return c;
}

PlanarCurve PlanarCurve::ellipse_center(double a, double b, const PlaneFrame& frame,
                                        const CurveDomain* domain) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("ellipse_center: semi-axes must be positive");
    PlanarCurve c;
    c.kind_ = CurveKind::EllipseCenter;
    c.frame_ = frame;
    c.domain_ = domain ? *domain : CurveDomain{0.0, kTwoPi};
    c.pa_ = a;
    c.pb_ = b;
    c.scale_ = std::max(1.0, std::max(a, b));
    return c;
}

PlanarCurve PlanarCurve::ellipse_focus(double a, double e, const PlaneFrame& frame,
                                       const CurveDomain* domain) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("ellipse_focus: semi-major axis must be positive");
    if (!(e >= 0.0) || !(e < 1.0))
        throw std::invalid_argument("ellipse_focus: eccentricity must be in [0, 1)");
    PlanarCurve c;
    c.kind_ = CurveKind::EllipseFocus;
    c.frame_ = frame;
    c.domain_ = domain ? *domain : CurveDomain{0.0, kTwoPi};
    c.pa_ = a;
    c.pb_ = e;
    c.scale_ = std::max(1.0, a * (1.0 + e));
    return c;
}

PlanarCurve PlanarCurve::sampled(const std::vector<double>& u,
                                 const std::vector<Vector3>& points) {
    if (u.size() != points.size())
        throw std::invalid_argument("sampled curve: parameter/point count mismatch");
    if (u.size() < 4)
        throw std::invalid_argument("sampled curve: need at least 4 samples");
    for (std::size_t i = 0; i < u.size(); ++i) {
        require_finite(u[i], "sampled curve parameter");
        require_finite(points[i], "sampled curve point");
        if (i > 0 && !(u[i] > u[i - 1]))
            throw std::invalid_argument("sampled curve: parameters must be strictly increasing");
    }

    Vector3 centroid{0.0, 0.0, 0.0};
    for (const auto& p : points) centroid += p;
    centroid = centroid / static_cast<double>(points.size());

    double extent = 0.0;
    for (const auto& p : points) extent = std::max(extent, (p - centroid).norm());
    if (extent == 0.0) throw std::invalid_argument("sampled curve: points are coincident");

    // Newell-style normal accumulated over consecutive point pairs.
    Vector3 normal{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        normal += (points[i] - centroid).cross(points[i + 1] - centroid);
    PlaneFrame frame;
    if (normal.norm() > 1e-12 * extent * extent) {
        frame = PlaneFrame::from_normal(centroid, normal);
    } else {
        // collinear samples: any plane containing the line works; pick one.
        Vector3 dir = (points.back() - points.front()).normalized();
        Vector3 seed{0.0, 0.0, 1.0};
        if (std::fabs(dir.dot(seed)) > 0.9) seed = {0.0, 1.0, 0.0};
        frame = PlaneFrame::from_axes(centroid, dir, seed.cross(dir));
    }

    const double tol = 1e-9 * std::max(1.0, extent);
    for (const auto& p : points)
        if (std::fabs((p - frame.origin).dot(frame.normal)) > tol)
            throw std::invalid_argument("sampled curve: points are not coplanar");

    PlanarCurve c;
    c.kind_ = CurveKind::CustomSampled;
    c.frame_ = frame;
    c.domain_ = CurveDomain{u.front(), u.back()};
    c.scale_ = std::max(1.0, extent);
    c.knots_ = u;
    c.sx_.reserve(points.size());
    c.sy_.reserve(points.size());
    for (const auto& p : points) {
        Vector3 d = p - frame.origin;
        c.sx_.push_back(d.dot(frame.e1));
        c.sy_.push_back(d.dot(frame.e2));
    }
    return c;
}

void PlanarCurve::check_domain(double u) const {
    require_finite(u, "curve parameter");
    double slack = 1e-12 * std::max(1.0, domain_.span()) +
                   8.0 * std::numeric_limits<double>::epsilon() *
                       std::max({std::fabs(domain_.u_min), std::fabs(domain_.u_max), 1.0});
    if (u < domain_.u_min - slack || u > domain_.u_max + slack)
        throw std::domain_error("curve parameter outside domain");
}

void PlanarCurve::local2d(double u, double& x, double& y, double& dx, double& dy,
                          double& ddx, double& ddy) const {
    switch (kind_) {
    case CurveKind::Circle: {
        double c = std::cos(u), s = std::sin(u);
        x = pa_ * c;  y = pa_ * s;
        dx = -pa_ * s; dy = pa_ * c;
        ddx = -pa_ * c; ddy = -pa_ * s;
        return;
    }
    case CurveKind::EllipseCenter: {
        double c = std::cos(u), s = std::sin(u);
        x = pa_ * c;  y = pb_ * s;
        dx = -pa_ * s; dy = pb_ * c;
        ddx = -pa_ * c; ddy = -pb_ * s;
        return;
    }
    case CurveKind::EllipseFocus: {
        double a = pa_, e = pb_;
        double p = a * (1.0 - e * e);
        double c = std::cos(u), s = std::sin(u);
        double w = 1.0 + e * c;
        double r = p / w;
        double dr = p * e * s / (w * w);
        double ddr = p * e * (c * w + 2.0 * e * s * s) / (w * w * w);
        x = r * c;  y = r * s;
        dx = dr * c - r * s;  dy = dr * s + r * c;
        ddx = ddr * c - 2.0 * dr * s - r * c;
        ddy = ddr * s + 2.0 * dr * c - r * s;
        return;
    }
    case CurveKind::CustomSampled: {
        std::size_t m = knots_.size();
        auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
        std::size_t i = (it == knots_.begin()) ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
        if (i > m - 2) i = m - 2;
        std::size_t is = (i == 0) ? 0 : i - 1;
        if (is > m - 4) is = m - 4;
        Cubic cx = Cubic::fit(&knots_[is], &sx_[is]);
        Cubic cy = Cubic::fit(&knots_[is], &sy_[is]);
        x = cx.value(u);  y = cy.value(u);
        dx = cx.deriv(u); dy = cy.deriv(u);
        ddx = cx.deriv2(u); ddy = cy.deriv2(u);
        return;
    }
    }
    throw std::logic_error("unreachable curve kind");
}

Vector3 PlanarCurve::evaluate(double u) const {
    check_domain(u);
    double x, y, dx, dy, ddx, ddy;
    local2d(u, x, y, dx, dy, ddx, ddy);
    return frame_.point(x, y);
}

Vector3 PlanarCurve::derivative(double u) const {
    check_domain(u);
    double x, y, dx, dy, ddx, ddy;
    local2d(u, x, y, dx, dy, ddx, ddy);
    return frame_.direction(dx, dy);
}

Vector3 PlanarCurve::second_derivative(double u) const {
    check_domain(u);
    double x, y, dx, dy, ddx, ddy;
    local2d(u, x, y, dx, dy, ddx, ddy);
    return frame_.direction(ddx, ddy);
}

Vector3 PlanarCurve::tangent(double u) const {
    Vector3 d = derivative(u);
    double n = d.norm();
    if (n < 1e-14 * scale_)
        throw std::domain_error("degenerate parameterization: |dR/du| vanishes");
    return d / n;
}

double PlanarCurve::curvature(double u) const {
    check_domain(u);
    double x, y, dx, dy, ddx, ddy;
    local2d(u, x, y, dx, dy, ddx, ddy);
    double speed2 = dx * dx + dy * dy;
    if (speed2 < 1e-28 * scale_ * scale_)
        throw std::domain_error("degenerate parameterization: |dR/du| vanishes");
    double cross = dx * ddy - dy * ddx;
    return std::fabs(cross) / (speed2 * std::sqrt(speed2));
}

double PlanarCurve::arc_length(double u0, double u1) const {
    check_domain(u0);
    check_domain(u1);
    if (u1 < u0) return -arc_length(u1, u0);
    if (u1 == u0) return 0.0;

    auto speed = [this](double u) {
        double x, y, dx, dy, ddx, ddy;
        local2d(u, x, y, dx, dy, ddx, ddy);
        return std::sqrt(dx * dx + dy * dy);
    };
    auto integrate = [&](std::size_t panels) {
        double total = 0.0;
        double h = (u1 - u0) / static_cast<double>(panels);
        for (std::size_t k = 0; k < panels; ++k) {
            double mid = u0 + (static_cast<double>(k) + 0.5) * h;
            double half = 0.5 * h;
            double acc = 0.0;
            for (std::size_t g = 0; g < kGlx.size(); ++g)
                acc += kGlw[g] * (speed(mid - half * kGlx[g]) + speed(mid + half * kGlx[g]));
            total += acc * half;
        }
        return total;
    };

    std::size_t panels = 4;
    double prev = integrate(panels);
    for (; panels <= 4096; panels *= 2) {
        double next = integrate(panels * 2);
        if (std::fabs(next - prev) <= 1e-13 * std::max(std::fabs(next), 1e-30)) return next;
        prev = next;
    }
    return prev;
}

double PlanarCurve::u_at_arc(double u0, double arc) const {
    check_domain(u0);
    require_finite(arc, "arc offset");
    if (arc == 0.0) return u0;

    auto signed_arc = [this, u0](double w) {
        return w >= u0 ? arc_length(u0, w) : -arc_length(w, u0);
    };
    double lo = arc > 0.0 ? u0 : domain_.u_min;
    double hi = arc > 0.0 ? domain_.u_max : u0;
    double reach = signed_arc(arc > 0.0 ? hi : lo);
    if (std::fabs(arc) > std::fabs(reach) * (1.0 + 1e-12))
        throw std::domain_error("u_at_arc: arc exceeds remaining curve length");

    auto speed = [this](double u) {
        double x, y, dx, dy, ddx, ddy;
        local2d(u, x, y, dx, dy, ddx, ddy);
        return std::sqrt(dx * dx + dy * dy);
    };

    double w = std::clamp(u0 + arc / std::max(speed(u0), 1e-300), lo, hi);
    const double tol = 1e-13 * std::max(1.0, domain_.span());
    for (int it = 0; it < 100; ++it) {
        double err = signed_arc(w) - arc;
        if (err > 0.0) hi = w; else lo = w;
        double step = -err / std::max(speed(w), 1e-300);
        double next = w + step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - w) <= tol) return next;
        w = next;
    }
    throw NumericalError("u_at_arc: Newton iteration did not converge");
}

double PlanarCurve::chord_for_arc(double u0, double arc) const {
    if (arc == 0.0) return 0.0;
    double w = u_at_arc(u0, arc);
    return (evaluate(w) - evaluate(u0)).norm();
}

double PlanarCurve::max_curvature(double u0, double u1) const {
    check_domain(u0);
    check_domain(u1);
    if (u1 < u0) std::swap(u0, u1);
    const std::size_t n = 1024;
    double best = 0.0, bestu = u0;
    for (std::size_t i = 0; i <= n; ++i) {
        double u = u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(n);
        double k = curvature(u);
        if (k > best) { best = k; bestu = u; }
    }
    // golden-section refinement around the best sample
    double h = (u1 - u0) / static_cast<double>(n);
    double a = std::max(u0, bestu - h), b = std::min(u1, bestu + h);
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = curvature(x1), f2 = curvature(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, domain_.span()); ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = curvature(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = curvature(x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

void validate_center(const PlanarCurve& curve, const ForceCenter& center) {
    require_finite(center.position, "force center");
    const PlaneFrame& fr = curve.frame();
    Vector3 d = center.position - fr.origin;
    if (std::fabs(d.dot(fr.normal)) > 1e-9 * std::max(curve.scale(), d.norm()))
        throw std::invalid_argument("force center does not lie in the curve plane");

    const CurveDomain& dom = curve.domain();
    double dmin = std::numeric_limits<double>::infinity();
    const std::size_t n = 512;
    for (std::size_t i = 0; i <= n; ++i) {
        double u = dom.u_min + dom.span() * static_cast<double>(i) / static_cast<double>(n);
        dmin = std::min(dmin, (curve.evaluate(u) - center.position).norm());
    }
    if (dmin < 1e-9 * curve.scale())
        throw std::invalid_argument("force center lies on the curve");
}

} // namespace polyorb
