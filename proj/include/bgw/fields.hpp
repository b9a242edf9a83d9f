#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bgw {

// Points live in at most two dimensions at desk scale; 1-d fields ignore y.
using Point = std::array<double, 2>;

inline double norm2(const Point& p, int dim) {
    return dim == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
}

// Uniform grid on the box [-L, L]^dim with the origin as a node.
struct GridSpec {
    int dim = 1;
    double L = 1.0;
    double h = 1.0 / 256;

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("GridSpec: dim must be 1 or 2");
        if (!(L > 0) || !(h > 0)) throw std::invalid_argument("GridSpec: L and h must be positive");
        const double half = L / h;
        if (std::abs(half - std::round(half)) > 1e-9 * std::max(1.0, half))
            throw std::invalid_argument("GridSpec: L/h must be an integer so the grid contains the origin");
    }

    // M = 2L/h cells per axis, M+1 nodes per axis.
    int cells_per_axis() const { return 2 * static_cast<int>(std::llround(L / h)); }
    int nodes_per_axis() const { return cells_per_axis() + 1; }
    std::size_t num_nodes() const {
        const std::size_t n = static_cast<std::size_t>(nodes_per_axis());
        return dim == 1 ? n : n * n;
    }
    double coord(int i) const { return -L + i * h; }
    int nearest_index(double x) const { return static_cast<int>(std::floor((x + L) / h + 0.5)); }
    bool index_in_range(int i) const { return i >= 0 && i <= cells_per_axis(); }
};

struct GridField {
    GridSpec spec;
    std::vector<double> values;  // 1-d: [ix]; 2-d row-major: [iy * nodes + ix]

    double at(int ix, int iy = 0) const {
        return spec.dim == 1 ? values[static_cast<std::size_t>(ix)]
                             : values[static_cast<std::size_t>(iy) * spec.nodes_per_axis() + ix];
    }
    double& at(int ix, int iy = 0) {
        return spec.dim == 1 ? values[static_cast<std::size_t>(ix)]
                             : values[static_cast<std::size_t>(iy) * spec.nodes_per_axis() + ix];
    }

    // Nearest-node sample; throws outside [-L, L]^dim (up to roundoff slack).
    double eval(const Point& x) const;
    // Nearest-node sample with zero extension beyond the box.
    double eval_extended(const Point& x) const;

    double max_abs() const;
    // Radius of the smallest origin-centered ball containing all nonzero
    // samples (plus half a cell); 0 for the zero field.
    double support_radius() const;

    void validate() const {
        spec.validate();
        if (values.size() != spec.num_nodes())
            throw std::invalid_argument("GridField: sample count does not match grid");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("GridField: non-finite sample");
    }
};

// Fixed C^1 cutoff profile: 1 on [0, 1/4], cubic Hermite ramp down to 0 at
// 1/2, 0 beyond. Flat derivative at both joins.
struct CutoffPsi {
    static double eval(double r) {
        if (r <= 0.25) return 1.0;
        if (r >= 0.5) return 0.0;
        const double t = (r - 0.25) * 4.0;
        return 1.0 - 3.0 * t * t + 2.0 * t * t * t;
    }
    static double deriv(double r) {
        if (r <= 0.25 || r >= 0.5) return 0.0;
        const double t = (r - 0.25) * 4.0;
        return (-6.0 * t + 6.0 * t * t) * 4.0;
    }
};

// Analytic families. All radial ones are defined on R^dim for dim in {1,2}.
struct LogBump {
    double delta;  // -log(|x| + delta) * psi(|x|), needs 0 < delta < 1/4
};
struct HolderCone {
    double eta;     // exponent in (0,1)
    double radius;  // min(|x|, radius)^eta
};
struct GaussianBump {
    double sigma;  // exp(-|x|^2 / (2 sigma^2))
};
struct Polynomial1D {
    std::vector<double> coeffs;  // sum_i coeffs[i] x^i, 1-d only
};
struct IndicatorBox {
    Point lo{0, 0};
    Point hi{0, 0};  // 1 inside, 1/2 on the boundary, 0 outside
};
struct CustomField {
    std::string name;
    std::function<double(const Point&, int dim)> fn;
};

struct AnalyticField {
    int dim = 1;
    std::variant<LogBump, HolderCone, GaussianBump, Polynomial1D, IndicatorBox, CustomField> family;

    double eval(const Point& x) const;
    void validate() const;
    const char* family_name() const;
};

double eval(const GridField& f, const Point& x);
double eval(const AnalyticField& f, const Point& x);

// Pointwise evaluation at every grid node.
GridField sample(const AnalyticField& f, const GridSpec& spec);

}  // namespace bgw
