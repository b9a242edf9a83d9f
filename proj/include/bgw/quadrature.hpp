#pragma once

#include <functional>
#include <variant>

#include "bgw/fields.hpp"

namespace bgw {

struct BoxRegion {
    Point lo{0, 0};
    Point hi{0, 0};
};
struct BallRegion {
    Point center{0, 0};
    double radius = 1.0;
};
struct AnnulusRegion {
    Point center{0, 0};
    double r_in = 1.0;
    double r_out = 2.0;
};
using Region = std::variant<BoxRegion, BallRegion, AnnulusRegion>;

// B_{2^{j+1}} \ B_{2^j} centered at the origin.
inline AnnulusRegion dyadic_annulus(int j) {
    return AnnulusRegion{{0, 0}, std::ldexp(1.0, j), std::ldexp(1.0, j + 1)};
}

double region_measure(const Region& region, int dim);
void region_bbox(const Region& region, int dim, Point& lo, Point& hi);

// Overlap fraction of the cell [center - h/2, center + h/2]^dim with the
// region. 1-d regions and 2-d boxes are interval intersections, computed
// exactly; straddling cells of 2-d balls/annuli are estimated by depth-2
// subdivision (4x4 subcell centers).
double cell_overlap_fraction(const Region& region, int dim, const Point& cell_center, double h);

struct QuadratureResult {
    double integral = 0.0;
    double measure = 0.0;  // mass of the quadrature weights over the region
};

// Pointwise map applied to samples before integrating. `outside` is the
// map's value on the zero extension beyond the grid box; it must not depend
// on the point for regions that leave the box.
struct SampleMap {
    std::function<double(double, const Point&)> g;  // empty = identity
    double outside = 0.0;
};

// Composite midpoint rule on the field's own node-centered cells. The region
// may extend beyond the grid box only with zero_extend = true; the part
// beyond the box contributes `outside` times the leftover measure. Throws if
// the region misses the box entirely (unless zero-extended) or exceeds it
// without permission.
QuadratureResult region_quadrature(const GridField& f, const Region& region,
                                   const SampleMap& map = {}, bool zero_extend = false);

// Same rule on an origin-aligned mesh of the given pitch. Closed-form exact
// path for 1-d polynomial integrands (identity map).
QuadratureResult region_quadrature(const AnalyticField& f, const Region& region, double cell,
                                   const SampleMap& map = {});

double box_integral(const GridField& f, const Region& region);
double box_integral(const AnalyticField& f, const Region& region, double cell = 1.0 / 256);

double region_average(const GridField& f, const Region& region, const SampleMap& map = {},
                      bool zero_extend = false);
double region_average(const AnalyticField& f, const Region& region, double cell,
                      const SampleMap& map = {});

}  // namespace bgw
