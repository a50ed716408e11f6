#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace polyorb {

struct Vector3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vector3() = default;
    Vector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vector3 operator+(const Vector3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vector3 operator-(const Vector3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vector3 operator-() const { return {-x, -y, -z}; }
    Vector3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vector3 operator/(double s) const { return {x / s, y / s, z / s}; }

    Vector3& operator+=(const Vector3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    Vector3& operator-=(const Vector3& o) {
        x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }

    bool operator==(const Vector3& o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vector3& o) const { return x * o.x + y * o.y + z * o.z; }

    Vector3 cross(const Vector3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    Vector3 normalized() const {
        double n = norm();
        if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
        return *this / n;
    }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vector3 operator*(double s, const Vector3& v) { return v * s; }

/// |(B−A)×(C−A)|: twice the area of triangle ABC. All polygon and trajectory
/// area bookkeeping uses this doubled convention.
inline double triangle_area2(const Vector3& a, const Vector3& b, const Vector3& c) {
    return (b - a).cross(c - a).norm();
}

inline void require_finite(const Vector3& v, const std::string& what) {
    if (!v.finite()) throw std::invalid_argument(what + ": non-finite components");
}

inline void require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw std::invalid_argument(what + ": non-finite value");
}

} // namespace polyorb
