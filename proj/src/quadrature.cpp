#include "bgw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgw {

namespace {

constexpr double kPi = 3.14159265358979323846;

double overlap_length(double lo1, double hi1, double lo2, double hi2) {
    return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

// 1-d regions are unions of at most two intervals.
struct Intervals1D {
    double lo[2];
    double hi[2];
    int count = 0;
};

Intervals1D intervals_1d(const Region& region) {
    Intervals1D out;
    if (const auto* box = std::get_if<BoxRegion>(&region)) {
        out.count = 1;
        out.lo[0] = box->lo[0];
        out.hi[0] = box->hi[0];
    } else if (const auto* ball = std::get_if<BallRegion>(&region)) {
        out.count = 1;
        out.lo[0] = ball->center[0] - ball->radius;
        out.hi[0] = ball->center[0] + ball->radius;
    } else {
        const auto& ann = std::get<AnnulusRegion>(region);
        out.count = 2;
        out.lo[0] = ann.center[0] - ann.r_out;
        out.hi[0] = ann.center[0] - ann.r_in;
        out.lo[1] = ann.center[0] + ann.r_in;
        out.hi[1] = ann.center[0] + ann.r_out;
    }
    return out;
}

// Distance range from a point to the cell rectangle.
void cell_distance_range(const Point& center, const Point& cell_center, double h, double& dmin,
                         double& dmax) {
    double dmin2 = 0.0, dmax2 = 0.0;
    for (int d = 0; d < 2; ++d) {
        const double off = std::abs(cell_center[d] - center[d]);
        const double lo = std::max(0.0, off - 0.5 * h);
        const double hi = off + 0.5 * h;
        dmin2 += lo * lo;
        dmax2 += hi * hi;
    }
    dmin = std::sqrt(dmin2);
    dmax = std::sqrt(dmax2);
}

double subdivision_fraction(const Point& cell_center, double h, const Point& center, double r_in,
                            double r_out) {
    int inside = 0;
    const double sub = h / 4.0;
    for (int sx = 0; sx < 4; ++sx) {
        for (int sy = 0; sy < 4; ++sy) {
            const double x = cell_center[0] - 0.5 * h + (sx + 0.5) * sub;
            const double y = cell_center[1] - 0.5 * h + (sy + 0.5) * sub;
            const double d = std::hypot(x - center[0], y - center[1]);
            if (d >= r_in && d < r_out) ++inside;
        }
    }
    return inside / 16.0;
}

double radial_fraction_2d(const Point& cell_center, double h, const Point& center, double r_in,
                          double r_out) {
    double dmin = 0.0, dmax = 0.0;
    cell_distance_range(center, cell_center, h, dmin, dmax);
    if (dmin >= r_in && dmax <= r_out) return 1.0;
    if (dmax <= r_in || dmin >= r_out) return 0.0;
    return subdivision_fraction(cell_center, h, center, r_in, r_out);
}

struct GridWindow {
    int lo[2] = {0, 0};
    int hi[2] = {-1, -1};
    bool empty = false;
};

// Index window of cells whose centers sit at -L + i h and whose extent can
// intersect [blo, bhi].
GridWindow index_window(double L, double h, const Point& blo, const Point& bhi, int dim) {
    GridWindow w;
    for (int d = 0; d < dim; ++d) {
        w.lo[d] = static_cast<int>(std::floor((blo[d] + L) / h - 0.5 - 1e-9));
        w.hi[d] = static_cast<int>(std::ceil((bhi[d] + L) / h + 0.5 + 1e-9));
        if (w.lo[d] > w.hi[d]) w.empty = true;
    }
    if (dim == 1) w.lo[1] = w.hi[1] = 0;
    return w;
}

}  // namespace

double region_measure(const Region& region, int dim) {
    if (const auto* box = std::get_if<BoxRegion>(&region)) {
        double m = 1.0;
        for (int d = 0; d < dim; ++d) m *= std::max(0.0, box->hi[d] - box->lo[d]);
        return m;
    }
    if (const auto* ball = std::get_if<BallRegion>(&region)) {
        const double r = ball->radius;
        return dim == 1 ? 2.0 * r : kPi * r * r;
    }
    const auto& ann = std::get<AnnulusRegion>(region);
    if (!(0 <= ann.r_in && ann.r_in < ann.r_out))
        throw std::invalid_argument("annulus: need 0 <= r_in < r_out");
    return dim == 1 ? 2.0 * (ann.r_out - ann.r_in)
                    : kPi * (ann.r_out * ann.r_out - ann.r_in * ann.r_in);
}

void region_bbox(const Region& region, int dim, Point& lo, Point& hi) {
    if (const auto* box = std::get_if<BoxRegion>(&region)) {
        lo = box->lo;
        hi = box->hi;
    } else if (const auto* ball = std::get_if<BallRegion>(&region)) {
        for (int d = 0; d < dim; ++d) {
            lo[d] = ball->center[d] - ball->radius;
            hi[d] = ball->center[d] + ball->radius;
        }
    } else {
        const auto& ann = std::get<AnnulusRegion>(region);
        for (int d = 0; d < dim; ++d) {
            lo[d] = ann.center[d] - ann.r_out;
            hi[d] = ann.center[d] + ann.r_out;
        }
    }
    if (dim == 1) lo[1] = hi[1] = 0.0;
}

double cell_overlap_fraction(const Region& region, int dim, const Point& cell_center, double h) {
    if (dim == 1) {
        const Intervals1D iv = intervals_1d(region);
        double len = 0.0;
        for (int i = 0; i < iv.count; ++i)
            len += overlap_length(cell_center[0] - 0.5 * h, cell_center[0] + 0.5 * h, iv.lo[i], iv.hi[i]);
        return len / h;
    }
    if (const auto* box = std::get_if<BoxRegion>(&region)) {
        double frac = 1.0;
        for (int d = 0; d < 2; ++d)
            frac *= overlap_length(cell_center[d] - 0.5 * h, cell_center[d] + 0.5 * h, box->lo[d],
                                   box->hi[d]) /
                    h;
        return frac;
    }
    if (const auto* ball = std::get_if<BallRegion>(&region))
        return radial_fraction_2d(cell_center, h, ball->center, 0.0, ball->radius);
    const auto& ann = std::get<AnnulusRegion>(region);
    return radial_fraction_2d(cell_center, h, ann.center, ann.r_in, ann.r_out);
}

QuadratureResult region_quadrature(const GridField& f, const Region& region, const SampleMap& map,
                                   bool zero_extend) {
    const GridSpec& spec = f.spec;
    const int dim = spec.dim;
    const double h = spec.h;
    const double cover = spec.L + 0.5 * h;  // extent of the node-centered cells

    Point blo{0, 0}, bhi{0, 0};
    region_bbox(region, dim, blo, bhi);

    bool extends = false, misses = false;
    for (int d = 0; d < dim; ++d) {
        if (blo[d] < -cover - 1e-12 || bhi[d] > cover + 1e-12) extends = true;
        if (bhi[d] < -cover || blo[d] > cover) misses = true;
    }
    if ((extends || misses) && !zero_extend)
        throw std::invalid_argument("region exceeds the field domain (zero extension not allowed)");

    const double exact = region_measure(region, dim);
    QuadratureResult out;
    if (misses) {
        out.integral = map.outside * exact;
        out.measure = exact;
        return out;
    }

    Point clo{std::max(blo[0], -cover), std::max(blo[1], -cover)};
    Point chi{std::min(bhi[0], cover), std::min(bhi[1], cover)};
    const GridWindow w = index_window(spec.L, h, clo, chi, dim);
    const int M = spec.cells_per_axis();
    const double cell_vol = dim == 1 ? h : h * h;

    for (int iy = std::max(w.lo[1], 0); iy <= std::min(w.hi[1], dim == 2 ? M : 0); ++iy) {
        for (int ix = std::max(w.lo[0], 0); ix <= std::min(w.hi[0], M); ++ix) {
            const Point p{spec.coord(ix), dim == 2 ? spec.coord(iy) : 0.0};
            const double frac = cell_overlap_fraction(region, dim, p, h);
            if (frac == 0.0) continue;
            const double weight = cell_vol * frac;
            const double v = f.at(ix, iy);
            out.integral += (map.g ? map.g(v, p) : v) * weight;
            out.measure += weight;
        }
    }

    if (extends) {
        // Mass of the region beyond the box carries the zero extension.
        const double leftover = std::max(0.0, exact - out.measure);
        out.integral += map.outside * leftover;
        out.measure = exact;
    }
    return out;
}

namespace {

double polynomial_primitive(const std::vector<double>& coeffs, double x) {
    // Antiderivative sum_i c_i x^{i+1} / (i+1), Horner on the augmented poly.
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i] / static_cast<double>(i + 1);
    return acc * x;
}

}  // namespace

QuadratureResult region_quadrature(const AnalyticField& f, const Region& region, double cell,
                                   const SampleMap& map) {
    if (!(cell > 0)) throw std::invalid_argument("region_quadrature: cell pitch must be positive");
    const int dim = f.dim;

    // Exact path: 1-d polynomial integrand, plain integral.
    if (dim == 1 && !map.g) {
        if (const auto* poly = std::get_if<Polynomial1D>(&f.family)) {
            const Intervals1D iv = intervals_1d(region);
            QuadratureResult out;
            for (int i = 0; i < iv.count; ++i) {
                out.integral += polynomial_primitive(poly->coeffs, iv.hi[i]) -
                                polynomial_primitive(poly->coeffs, iv.lo[i]);
                out.measure += iv.hi[i] - iv.lo[i];
            }
            return out;
        }
    }

    Point blo{0, 0}, bhi{0, 0};
    region_bbox(region, dim, blo, bhi);
    const GridWindow w = index_window(0.0, cell, blo, bhi, dim);
    if (w.empty) throw std::invalid_argument("region_quadrature: empty region");

    const double cell_vol = dim == 1 ? cell : cell * cell;
    QuadratureResult out;
    for (int iy = w.lo[1]; iy <= w.hi[1]; ++iy) {
        for (int ix = w.lo[0]; ix <= w.hi[0]; ++ix) {
            const Point p{ix * cell, dim == 2 ? iy * cell : 0.0};
            const double frac = cell_overlap_fraction(region, dim, p, cell);
            if (frac == 0.0) continue;
            const double weight = cell_vol * frac;
            const double v = f.eval(p);
            out.integral += (map.g ? map.g(v, p) : v) * weight;
            out.measure += weight;
        }
    }
    return out;
}

double box_integral(const GridField& f, const Region& region) {
    return region_quadrature(f, region).integral;
}

double box_integral(const AnalyticField& f, const Region& region, double cell) {
    return region_quadrature(f, region, cell).integral;
}

double region_average(const GridField& f, const Region& region, const SampleMap& map,
                      bool zero_extend) {
    const QuadratureResult q = region_quadrature(f, region, map, zero_extend);
    if (!(q.measure > 0)) throw std::invalid_argument("region_average: vanishing region measure");
    return q.integral / q.measure;
}

double region_average(const AnalyticField& f, const Region& region, double cell,
                      const SampleMap& map) {
    const QuadratureResult q = region_quadrature(f, region, cell, map);
    if (!(q.measure > 0)) throw std::invalid_argument("region_average: vanishing region measure");
    return q.integral / q.measure;
}

}  // namespace bgw
