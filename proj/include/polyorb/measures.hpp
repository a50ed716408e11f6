#pragma once

#include <vector>

#include "polyorb/analysis.hpp"
#include "polyorb/curve.hpp"
#include "polyorb/polygon.hpp"

namespace polyorb {

/// Polygon force measure at interior vertex j: deflection(j) / areas2(j)^2.
/// In the continuum limit this converges to twice the tangent-line measure at
/// the same curve point. Throws std::out_of_range at endpoint vertices.
double prop1_measure(const PolygonOrbit& orbit, std::size_t j);

/// Tangent-line force measure at parameter u with arc offset h (signed):
/// QR / (SP * QT)^2, where Q is the curve point one arc h away from P,
/// R is the point of the tangent line at P reached from Q along the direction
/// S - P, and QT is the distance from Q to the line SP. Throws TangencyError
/// when the radius at P is tangent to the curve.
double prop6_measure(const PlanarCurve& curve, const ForceCenter& center, double u, double h);

/// Richardson limit of prop6_measure over offsets {h0, h0/2, h0/4}.
double prop6_extrapolated(const PlanarCurve& curve, const ForceCenter& center, double u,
                          double h0);

struct ForceMeasureSample {
    double u = 0.0;
    double prop1 = 0.0;
    double prop6 = 0.0;
    double ratio = 0.0;
};

/// Matched-point ratio study at curve parameter u: for each n a local polygon
/// starts at u with first arc local_arc/n, the polygon measure is taken at its
/// first interior vertex, and the tangent-line measure is extrapolated at that
/// same vertex parameter. The reported limit of the ratio is 2 for smooth
/// curves away from tangencies.
ConvergenceReport ratio_convergence(const PlanarCurve& curve, const ForceCenter& center,
                                    double u, const std::vector<std::size_t>& n_values,
                                    double local_arc = 0.5, double h0 = 0.01,
                                    unsigned threads = 1);

} // namespace polyorb
