#include "bgw/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bgw/parallel.hpp"

namespace bgw {

void meta_put(EstimatorMeta& meta, const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    meta[key] = buf;
}

void meta_put_grid(EstimatorMeta& meta, const GridSpec& spec) {
    meta_put(meta, "grid_dim", spec.dim);
    meta_put(meta, "grid_L", spec.L);
    meta_put(meta, "grid_h", spec.h);
}

namespace {

constexpr std::size_t kOffsetBlock = 64;

void check_pair_budget(double pairs) {
    if (pairs > 4e9)
        throw std::invalid_argument("pair estimator over budget: grid too large for desk scale");
}

}  // namespace

CubeFamily dyadic_cube_family(const GridSpec& spec, std::size_t budget_per_scale) {
    spec.validate();
    if (budget_per_scale == 0) throw std::invalid_argument("dyadic_cube_family: zero budget");
    const int M = spec.cells_per_axis();
    CubeFamily fam;
    for (int t = 0; (1 << t) <= M; ++t) {
        const int side = 1 << t;
        const long positions = M - side + 1;
        if (spec.dim == 1) {
            const double window = side + 1;
            const long stride = std::max<long>(
                1, static_cast<long>(positions * window / static_cast<double>(budget_per_scale)));
            for (long i0 = 0; i0 < positions; i0 += stride)
                fam.cubes.push_back({t, {static_cast<int>(i0), 0}});
        } else {
            const double window = static_cast<double>(side + 1) * (side + 1);
            const double per_axis_budget = std::sqrt(static_cast<double>(budget_per_scale) / window);
            const long stride =
                std::max<long>(1, static_cast<long>(std::ceil(positions / std::max(1.0, per_axis_budget))));
            for (long iy = 0; iy < positions; iy += stride)
                for (long ix = 0; ix < positions; ix += stride)
                    fam.cubes.push_back({t, {static_cast<int>(ix), static_cast<int>(iy)}});
        }
    }
    return fam;
}

SeminormReport bmo_norm(const GridField& f, const CubeFamily& family) {
    f.validate();
    if (family.cubes.empty()) throw std::invalid_argument("bmo_norm: empty cube family");
    const GridSpec& spec = f.spec;
    const int nodes = spec.nodes_per_axis();

    // Prefix sums make the window means one subtraction each.
    std::vector<double> prefix;
    if (spec.dim == 1) {
        prefix.resize(nodes + 1, 0.0);
        for (int i = 0; i < nodes; ++i) prefix[i + 1] = prefix[i] + f.values[i];
    } else {
        prefix.assign(static_cast<std::size_t>(nodes + 1) * (nodes + 1), 0.0);
        for (int iy = 0; iy < nodes; ++iy)
            for (int ix = 0; ix < nodes; ++ix)
                prefix[(iy + 1ull) * (nodes + 1) + ix + 1] = f.at(ix, iy) +
                                                            prefix[iy * (nodes + 1ull) + ix + 1] +
                                                            prefix[(iy + 1ull) * (nodes + 1) + ix] -
                                                            prefix[iy * (nodes + 1ull) + ix];
    }

    auto window_sum = [&](const Cube& c) -> double {
        const int side = 1 << c.t;
        if (spec.dim == 1) return prefix[c.origin[0] + side + 1] - prefix[c.origin[0]];
        const int x0 = c.origin[0], y0 = c.origin[1];
        const int x1 = x0 + side + 1, y1 = y0 + side + 1;
        return prefix[static_cast<std::size_t>(y1) * (nodes + 1) + x1] -
               prefix[static_cast<std::size_t>(y0) * (nodes + 1) + x1] -
               prefix[static_cast<std::size_t>(y1) * (nodes + 1) + x0] +
               prefix[static_cast<std::size_t>(y0) * (nodes + 1) + x0];
    };

    auto oscillation = [&](const Cube& c) -> double {
        const int side = 1 << c.t;
        const double count = spec.dim == 1 ? side + 1 : static_cast<double>(side + 1) * (side + 1);
        const double mean = window_sum(c) / count;
        double dev = 0.0;
        if (spec.dim == 1) {
            for (int i = c.origin[0]; i <= c.origin[0] + side; ++i)
                dev += std::abs(f.values[i] - mean);
        } else {
            for (int iy = c.origin[1]; iy <= c.origin[1] + side; ++iy)
                for (int ix = c.origin[0]; ix <= c.origin[0] + side; ++ix)
                    dev += std::abs(f.at(ix, iy) - mean);
        }
        return dev / count;
    };

    const std::size_t blocks = (family.cubes.size() + kOffsetBlock - 1) / kOffsetBlock;
    std::vector<double> maxima = run_blocks<double>(blocks, [&](std::size_t b) {
        double local = 0.0;
        const std::size_t lo = b * kOffsetBlock;
        const std::size_t hi = std::min(family.cubes.size(), lo + kOffsetBlock);
        for (std::size_t i = lo; i < hi; ++i) local = std::max(local, oscillation(family.cubes[i]));
        return local;
    });

    SeminormReport rep;
    rep.kind = SeminormKind::Bmo;
    rep.bias = EstimatorBias::LowerBound;
    rep.value = maxima.empty() ? 0.0 : *std::max_element(maxima.begin(), maxima.end());
    meta_put(rep.meta, "cube_count", static_cast<double>(family.cubes.size()));
    meta_put_grid(rep.meta, spec);
    rep.meta["cube_shape"] = "axis-aligned dyadic, node means";
    return rep;
}

SeminormReport bmo_norm(const GridField& f) { return bmo_norm(f, dyadic_cube_family(f.spec)); }

SeminormReport holder_seminorm(const GridField& f, double eta) {
    f.validate();
    if (!(eta > 0 && eta < 1)) throw std::invalid_argument("holder_seminorm: eta must lie in (0,1)");
    const GridSpec& spec = f.spec;
    const int M = spec.cells_per_axis();
    const int nodes = spec.nodes_per_axis();
    if (f.values.size() < 2) throw std::invalid_argument("holder_seminorm: degenerate single-node grid");
    const double h = spec.h;
    const double* v = f.values.data();

    double value = 0.0;
    if (spec.dim == 1) {
        check_pair_budget(0.5 * static_cast<double>(nodes) * nodes);
        const std::size_t blocks = (static_cast<std::size_t>(M) + kOffsetBlock - 1) / kOffsetBlock;
        std::vector<double> maxima = run_blocks<double>(blocks, [&](std::size_t b) {
            double local = 0.0;
            const int lo = static_cast<int>(b * kOffsetBlock) + 1;
            const int hi = std::min<int>(M, lo + kOffsetBlock - 1);
            for (int d = lo; d <= hi; ++d) {
                double best = 0.0;
                for (int i = 0; i + d < nodes; ++i) best = std::max(best, std::abs(v[i + d] - v[i]));
                local = std::max(local, best * std::pow(d * h, -eta));
            }
            return local;
        });
        value = maxima.empty() ? 0.0 : *std::max_element(maxima.begin(), maxima.end());
    } else {
        check_pair_budget(0.5 * static_cast<double>(f.values.size()) * f.values.size());
        std::vector<double> maxima = run_blocks<double>(static_cast<std::size_t>(M) + 1, [&](std::size_t dy_) {
            const int dy = static_cast<int>(dy_);
            double local = 0.0;
            for (int dx = (dy == 0 ? 1 : -M); dx <= M; ++dx) {
                const double dist = h * std::hypot(static_cast<double>(dx), static_cast<double>(dy));
                const double scale = std::pow(dist, -eta);
                double best = 0.0;
                const int x0 = std::max(0, -dx), x1 = std::min(M, M - dx);
                for (int iy = 0; iy + dy <= M; ++iy) {
                    const double* row = v + static_cast<std::size_t>(iy) * nodes;
                    const double* row2 = v + static_cast<std::size_t>(iy + dy) * nodes + dx;
                    for (int ix = x0; ix <= x1; ++ix) best = std::max(best, std::abs(row2[ix] - row[ix]));
                }
                local = std::max(local, best * scale);
            }
            return local;
        });
        value = maxima.empty() ? 0.0 : *std::max_element(maxima.begin(), maxima.end());
    }

    SeminormReport rep;
    rep.kind = SeminormKind::Holder;
    rep.bias = EstimatorBias::LowerBound;
    rep.value = value;
    meta_put(rep.meta, "eta", eta);
    meta_put(rep.meta, "pair_count", 0.5 * static_cast<double>(f.values.size()) * (f.values.size() - 1));
    meta_put_grid(rep.meta, spec);
    return rep;
}

namespace {

// sum over ordered node pairs of |f(x)-f(y)|^p / |x-y|^{dim + s1 p} h^{2 dim},
// diagonal excluded below `exclusion`. Deterministic for any worker count.
double gagliardo_power_sum(const GridField& f, double s1, double p, double exclusion) {
    const GridSpec& spec = f.spec;
    const int M = spec.cells_per_axis();
    const int nodes = spec.nodes_per_axis();
    const double h = spec.h;
    const double* v = f.values.data();
    const double kernel_exp = spec.dim + s1 * p;

    std::vector<double> partials;
    if (spec.dim == 1) {
        check_pair_budget(0.5 * static_cast<double>(nodes) * nodes);
        const int dmin = std::max(1, static_cast<int>(std::ceil(exclusion / h - 1e-9)));
        if (dmin > M) return 0.0;
        const std::size_t blocks =
            (static_cast<std::size_t>(M - dmin + 1) + kOffsetBlock - 1) / kOffsetBlock;
        partials = run_blocks<double>(blocks, [&](std::size_t b) {
            const int lo = dmin + static_cast<int>(b * kOffsetBlock);
            const int hi = std::min<int>(M, lo + kOffsetBlock - 1);
            double acc = 0.0;
            for (int d = lo; d <= hi; ++d) {
                double s = 0.0;
                if (p == 2.0) {
                    for (int i = 0; i + d < nodes; ++i) {
                        const double diff = v[i + d] - v[i];
                        s += diff * diff;
                    }
                } else if (p == 1.0) {
                    for (int i = 0; i + d < nodes; ++i) s += std::abs(v[i + d] - v[i]);
                } else {
                    for (int i = 0; i + d < nodes; ++i) s += std::pow(std::abs(v[i + d] - v[i]), p);
                }
                acc += s * (2.0 * h * h * std::pow(d * h, -kernel_exp));
            }
            return acc;
        });
    } else {
        check_pair_budget(0.5 * static_cast<double>(f.values.size()) * f.values.size());
        partials = run_blocks<double>(static_cast<std::size_t>(M) + 1, [&](std::size_t dy_) {
            const int dy = static_cast<int>(dy_);
            double acc = 0.0;
            const double w0 = 2.0 * h * h * h * h;
            for (int dx = (dy == 0 ? 1 : -M); dx <= M; ++dx) {
                const double dist = h * std::hypot(static_cast<double>(dx), static_cast<double>(dy));
                if (dist < exclusion - 1e-15) continue;
                const double w = w0 * std::pow(dist, -kernel_exp);
                double s = 0.0;
                const int x0 = std::max(0, -dx), x1 = std::min(M, M - dx);
                for (int iy = 0; iy + dy <= M; ++iy) {
                    const double* row = v + static_cast<std::size_t>(iy) * nodes;
                    const double* row2 = v + static_cast<std::size_t>(iy + dy) * nodes + dx;
                    if (p == 2.0) {
                        for (int ix = x0; ix <= x1; ++ix) {
                            const double diff = row2[ix] - row[ix];
                            s += diff * diff;
                        }
                    } else if (p == 1.0) {
                        for (int ix = x0; ix <= x1; ++ix) s += std::abs(row2[ix] - row[ix]);
                    } else {
                        for (int ix = x0; ix <= x1; ++ix) s += std::pow(std::abs(row2[ix] - row[ix]), p);
                    }
                }
                acc += s * w;
            }
            return acc;
        });
    }
    return pairwise_sum(partials);
}

double lp_norm(const GridField& f, double p) {
    const double cell = f.spec.dim == 1 ? f.spec.h : f.spec.h * f.spec.h;
    std::vector<double> terms(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        terms[i] = std::pow(std::abs(f.values[i]), p) * cell;
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

}  // namespace

SeminormReport sobolev_seminorm(const GridField& f, double s, double p, double exclusion) {
    f.validate();
    if (!(s > 0)) throw std::invalid_argument("sobolev_seminorm: s must be positive");
    if (!(p >= 1)) throw std::invalid_argument("sobolev_seminorm: p must be >= 1");
    if (exclusion < 0) exclusion = f.spec.h;
    if (exclusion < f.spec.h - 1e-15)
        throw std::invalid_argument("sobolev_seminorm: exclusion must be at least the grid spacing");

    SeminormReport rep;
    rep.kind = SeminormKind::Sobolev;
    rep.bias = EstimatorBias::QuadratureApprox;
    meta_put(rep.meta, "s", s);
    meta_put(rep.meta, "p", p);
    meta_put(rep.meta, "exclusion", exclusion);
    meta_put_grid(rep.meta, f.spec);

    const double rounded = std::round(s);
    const bool integer_s = std::abs(s - rounded) < 1e-9 && rounded >= 1;
    if (integer_s) {
        const int k = static_cast<int>(rounded);
        double value = 0.0;
        for (const auto& sigma : multi_indices(k, f.spec.dim))
            value += lp_norm(derivative_grid(f, sigma).samples, p);
        rep.value = value;
        rep.meta["branch"] = "integer: sum of L^p norms of top derivatives";
        return rep;
    }

    const int k = static_cast<int>(std::floor(s));
    const double s1 = s - k;
    meta_put(rep.meta, "derivative_order", k);
    meta_put(rep.meta, "s1", s1);
    rep.meta["branch"] = "gagliardo";
    double value = 0.0;
    if (k == 0) {
        value = std::pow(gagliardo_power_sum(f, s1, p, exclusion), 1.0 / p);
    } else {
        for (const auto& sigma : multi_indices(k, f.spec.dim)) {
            const GridField d = derivative_grid(f, sigma).samples;
            value += std::pow(gagliardo_power_sum(d, s1, p, exclusion), 1.0 / p);
        }
    }
    rep.value = value;
    return rep;
}

std::vector<Point> default_z_candidates(const GridSpec& spec) {
    const int count = spec.dim == 1 ? 65 : 33;
    const double extent = spec.L + 2.0;
    const double pitch = 2.0 * extent / (count - 1);
    std::vector<Point> zs;
    if (spec.dim == 1) {
        zs.reserve(count);
        for (int i = 0; i < count; ++i) zs.push_back({-extent + i * pitch, 0.0});
    } else {
        zs.reserve(static_cast<std::size_t>(count) * count);
        for (int iy = 0; iy < count; ++iy)
            for (int ix = 0; ix < count; ++ix)
                zs.push_back({-extent + ix * pitch, -extent + iy * pitch});
    }
    return zs;
}

SeminormReport weighted_sup_integral(const GridField& f, double alpha,
                                     std::span<const Point> z_candidates) {
    f.validate();
    if (!(alpha > 0)) throw std::invalid_argument("weighted_sup_integral: alpha must be positive");
    if (z_candidates.empty()) throw std::invalid_argument("weighted_sup_integral: empty candidate set");

    const GridSpec& spec = f.spec;
    const int nodes = spec.nodes_per_axis();
    const double cell = spec.dim == 1 ? spec.h : spec.h * spec.h;

    // The kernel decays, so nodes where f vanishes can be skipped wholesale.
    struct Piece {
        double x, y, absval;
    };
    std::vector<Piece> support;
    for (int iy = 0; iy < (spec.dim == 2 ? nodes : 1); ++iy)
        for (int ix = 0; ix < nodes; ++ix)
            if (const double val = f.at(ix, iy); val != 0.0)
                support.push_back(
                    {spec.coord(ix), spec.dim == 2 ? spec.coord(iy) : 0.0, std::abs(val)});

    struct BlockBest {
        double value = 0.0;
        std::size_t index = 0;
    };
    const std::size_t group = 8;
    const std::size_t blocks = (z_candidates.size() + group - 1) / group;
    std::vector<BlockBest> best = run_blocks<BlockBest>(blocks, [&](std::size_t b) {
        BlockBest local;
        const std::size_t lo = b * group;
        const std::size_t hi = std::min(z_candidates.size(), lo + group);
        for (std::size_t zi = lo; zi < hi; ++zi) {
            const Point& z = z_candidates[zi];
            double s = 0.0;
            if (spec.dim == 1) {
                for (const Piece& pc : support) s += pc.absval * std::pow(std::abs(z[0] - pc.x) + 1.0, -alpha);
            } else {
                for (const Piece& pc : support)
                    s += pc.absval * std::pow(std::hypot(z[0] - pc.x, z[1] - pc.y) + 1.0, -alpha);
            }
            s *= cell;
            if (s > local.value) {
                local.value = s;
                local.index = zi;
            }
        }
        return local;
    });

    BlockBest overall;
    for (const BlockBest& bb : best)
        if (bb.value > overall.value) overall = bb;

    SeminormReport rep;
    rep.kind = SeminormKind::WeightedSup;
    rep.bias = EstimatorBias::LowerBound;
    rep.value = overall.value;
    meta_put(rep.meta, "alpha", alpha);
    meta_put(rep.meta, "z_count", static_cast<double>(z_candidates.size()));
    meta_put(rep.meta, "argmax_z_x", z_candidates[overall.index][0]);
    if (spec.dim == 2) meta_put(rep.meta, "argmax_z_y", z_candidates[overall.index][1]);
    meta_put_grid(rep.meta, spec);
    rep.meta["bias_note"] = "lower bound in z, quadrature in y";
    return rep;
}

SeminormReport weighted_sup_integral(const GridField& f, double alpha) {
    const std::vector<Point> zs = default_z_candidates(f.spec);
    return weighted_sup_integral(f, alpha, zs);
}

double annulus_average(const GridField& f, int j, bool zero_extend) {
    return region_average(f, dyadic_annulus(j), {}, zero_extend);
}

double ball_average(const GridField& f, double rho, bool zero_extend) {
    return region_average(f, BallRegion{{0, 0}, rho}, {}, zero_extend);
}

double annulus_average(const AnalyticField& f, int j, double cell) {
    return region_average(f, dyadic_annulus(j), cell);
}

double ball_average(const AnalyticField& f, double rho, double cell) {
    return region_average(f, BallRegion{{0, 0}, rho}, cell);
}

DerivativeGrid derivative_grid(const GridField& f, std::array<int, 2> sigma) {
    f.validate();
    if (sigma[0] < 0 || sigma[1] < 0) throw std::invalid_argument("derivative_grid: negative order");
    if (f.spec.dim == 1 && sigma[1] != 0)
        throw std::invalid_argument("derivative_grid: y-derivative of a 1-d field");
    const int order = sigma[0] + sigma[1];
    const int M = f.spec.cells_per_axis();
    if (M - 2 * order < 1)
        throw std::invalid_argument("derivative_grid: grid too small for the requested order");

    const int nodes = f.spec.nodes_per_axis();
    const double inv2h = 1.0 / (2.0 * f.spec.h);
    std::vector<double> work = f.values;
    std::vector<double> scratch(work.size(), 0.0);

    int margin = 0;  // cells invalidated so far at each side
    auto apply_axis = [&](int axis) {
        if (f.spec.dim == 1) {
            for (int i = margin + 1; i <= M - margin - 1; ++i)
                scratch[i] = (work[i + 1] - work[i - 1]) * inv2h;
        } else {
            for (int iy = margin + 1; iy <= M - margin - 1; ++iy) {
                for (int ix = margin + 1; ix <= M - margin - 1; ++ix) {
                    const std::size_t at = static_cast<std::size_t>(iy) * nodes + ix;
                    scratch[at] = axis == 0 ? (work[at + 1] - work[at - 1]) * inv2h
                                            : (work[at + nodes] - work[at - nodes]) * inv2h;
                }
            }
        }
        work.swap(scratch);
        ++margin;
    };
    for (int i = 0; i < sigma[0]; ++i) apply_axis(0);
    for (int i = 0; i < sigma[1]; ++i) apply_axis(1);

    DerivativeGrid out;
    out.order = order;
    out.sigma = sigma;
    out.samples.spec = GridSpec{f.spec.dim, f.spec.L - order * f.spec.h, f.spec.h};
    const int newNodes = out.samples.spec.nodes_per_axis();
    out.samples.values.resize(out.samples.spec.num_nodes());
    if (f.spec.dim == 1) {
        for (int i = 0; i < newNodes; ++i) out.samples.values[i] = work[i + order];
    } else {
        for (int iy = 0; iy < newNodes; ++iy)
            for (int ix = 0; ix < newNodes; ++ix)
                out.samples.at(ix, iy) = work[static_cast<std::size_t>(iy + order) * nodes + ix + order];
    }
    out.samples.validate();
    return out;
}

std::vector<std::array<int, 2>> multi_indices(int order, int dim) {
    if (order < 0) throw std::invalid_argument("multi_indices: negative order");
    if (dim == 1) return {{order, 0}};
    std::vector<std::array<int, 2>> out;
    for (int i = 0; i <= order; ++i) out.push_back({order - i, i});
    return out;
}

}  // namespace bgw
