#include "bgw/fields.hpp"

#include <algorithm>

namespace bgw {

double GridField::eval(const Point& x) const {
    const double slack = 0.5 * spec.h;
    for (int d = 0; d < spec.dim; ++d)
        if (std::abs(x[d]) > spec.L + slack)
            throw std::out_of_range("GridField::eval: point outside [-L, L]^dim");
    const int ix = std::clamp(spec.nearest_index(x[0]), 0, spec.cells_per_axis());
    if (spec.dim == 1) return at(ix);
    const int iy = std::clamp(spec.nearest_index(x[1]), 0, spec.cells_per_axis());
    return at(ix, iy);
}

double GridField::eval_extended(const Point& x) const {
    const int ix = spec.nearest_index(x[0]);
    if (!spec.index_in_range(ix)) return 0.0;
    if (spec.dim == 1) return at(ix);
    const int iy = spec.nearest_index(x[1]);
    if (!spec.index_in_range(iy)) return 0.0;
    return at(ix, iy);
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double GridField::support_radius() const {
    const int nodes = spec.nodes_per_axis();
    double r = 0.0;
    bool any = false;
    for (int iy = 0; iy < (spec.dim == 2 ? nodes : 1); ++iy) {
        for (int ix = 0; ix < nodes; ++ix) {
            if (at(ix, iy) == 0.0) continue;
            any = true;
            Point p{spec.coord(ix), spec.dim == 2 ? spec.coord(iy) : 0.0};
            r = std::max(r, norm2(p, spec.dim));
        }
    }
    return any ? r + 0.5 * spec.h : 0.0;
}

double AnalyticField::eval(const Point& x) const {
    const double r = norm2(x, dim);
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, LogBump>) {
                return -std::log(r + fam.delta) * CutoffPsi::eval(r);
            } else if constexpr (std::is_same_v<T, HolderCone>) {
                return std::pow(std::min(r, fam.radius), fam.eta);
            } else if constexpr (std::is_same_v<T, GaussianBump>) {
                return std::exp(-r * r / (2.0 * fam.sigma * fam.sigma));
            } else if constexpr (std::is_same_v<T, Polynomial1D>) {
                double acc = 0.0;
                for (auto it = fam.coeffs.rbegin(); it != fam.coeffs.rend(); ++it)
                    acc = acc * x[0] + *it;
                return acc;
            } else if constexpr (std::is_same_v<T, IndicatorBox>) {
                bool boundary = false;
                for (int d = 0; d < dim; ++d) {
                    if (x[d] < fam.lo[d] || x[d] > fam.hi[d]) return 0.0;
                    if (x[d] == fam.lo[d] || x[d] == fam.hi[d]) boundary = true;
                }
                return boundary ? 0.5 : 1.0;
            } else {
                return fam.fn(x, dim);
            }
        },
        family);
}

void AnalyticField::validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("AnalyticField: dim must be 1 or 2");
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, LogBump>) {
                if (!(fam.delta > 0 && fam.delta < 0.25))
                    throw std::invalid_argument("LogBump: delta must lie in (0, 1/4)");
            } else if constexpr (std::is_same_v<T, HolderCone>) {
                if (!(fam.eta > 0 && fam.eta < 1))
                    throw std::invalid_argument("HolderCone: eta must lie in (0, 1)");
                if (!(fam.radius > 0)) throw std::invalid_argument("HolderCone: radius must be positive");
            } else if constexpr (std::is_same_v<T, GaussianBump>) {
                if (!(fam.sigma > 0)) throw std::invalid_argument("GaussianBump: sigma must be positive");
            } else if constexpr (std::is_same_v<T, Polynomial1D>) {
                if (dim != 1) throw std::invalid_argument("Polynomial1D: only defined for dim 1");
                if (fam.coeffs.empty()) throw std::invalid_argument("Polynomial1D: empty coefficients");
            } else if constexpr (std::is_same_v<T, IndicatorBox>) {
                for (int d = 0; d < dim; ++d)
                    if (!(fam.lo[d] < fam.hi[d]))
                        throw std::invalid_argument("IndicatorBox: lo must be below hi");
            } else {
                if (!fam.fn) throw std::invalid_argument("CustomField: missing function");
            }
        },
        family);
}

const char* AnalyticField::family_name() const {
    return std::visit(
        [](const auto& fam) -> const char* {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, LogBump>) return "log_bump";
            else if constexpr (std::is_same_v<T, HolderCone>) return "holder_cone";
            else if constexpr (std::is_same_v<T, GaussianBump>) return "gaussian";
            else if constexpr (std::is_same_v<T, Polynomial1D>) return "polynomial";
            else if constexpr (std::is_same_v<T, IndicatorBox>) return "indicator";
            else return "custom";
        },
        family);
}

double eval(const GridField& f, const Point& x) { return f.eval(x); }
double eval(const AnalyticField& f, const Point& x) { return f.eval(x); }

GridField sample(const AnalyticField& f, const GridSpec& spec) {
    f.validate();
    spec.validate();
    if (f.dim != spec.dim) throw std::invalid_argument("sample: field/grid dimension mismatch");
    GridField out;
    out.spec = spec;
    out.values.resize(spec.num_nodes());
    const int nodes = spec.nodes_per_axis();
    if (spec.dim == 1) {
        for (int ix = 0; ix < nodes; ++ix) out.values[ix] = f.eval({spec.coord(ix), 0.0});
    } else {
        for (int iy = 0; iy < nodes; ++iy)
            for (int ix = 0; ix < nodes; ++ix)
                out.at(ix, iy) = f.eval({spec.coord(ix), spec.coord(iy)});
    }
    out.validate();
    return out;
}

}  // namespace bgw
