#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bgw/fields.hpp"
#include "bgw/quadrature.hpp"

namespace bgw {

enum class SeminormKind { Bmo, Holder, Sobolev, WeightedSup };

// LowerBound: a finite candidate family under-approximates a sup.
// QuadratureApprox: discretization error in either direction.
enum class EstimatorBias { LowerBound, QuadratureApprox };

using EstimatorMeta = std::map<std::string, std::string>;

struct SeminormReport {
    SeminormKind kind = SeminormKind::Bmo;
    double value = 0.0;
    EstimatorBias bias = EstimatorBias::LowerBound;
    EstimatorMeta meta;
};

void meta_put(EstimatorMeta& meta, const std::string& key, double value);
void meta_put_grid(EstimatorMeta& meta, const GridSpec& spec);

// Axis-aligned dyadic cube of side 2^t h: nodes origin[d] .. origin[d] + 2^t.
struct Cube {
    int t = 0;
    std::array<int, 2> origin{0, 0};
};
struct CubeFamily {
    std::vector<Cube> cubes;
};

// Every dyadic scale at grid-aligned translations; translations are strided
// so that a single scale costs at most budget_per_scale node visits.
CubeFamily dyadic_cube_family(const GridSpec& spec, std::size_t budget_per_scale = std::size_t(1) << 22);

// Largest mean oscillation over the cube family (lower bound for the sup).
SeminormReport bmo_norm(const GridField& f, const CubeFamily& family);
SeminormReport bmo_norm(const GridField& f);

// Largest |f(x)-f(y)| / |x-y|^eta over distinct node pairs.
SeminormReport holder_seminorm(const GridField& f, double eta);

// Gagliardo double sum for fractional s (applied to central-difference
// derivatives of order [s] when s > 1), plain L^p of top derivatives for
// integer s. Pairs closer than `exclusion` are dropped; exclusion < 0
// selects the default h.
SeminormReport sobolev_seminorm(const GridField& f, double s, double p, double exclusion = -1.0);

// Candidate maximizer set: coarse grid over the box enlarged by 2 units.
std::vector<Point> default_z_candidates(const GridSpec& spec);

// sup_z int |f(y)| / (|z-y| + 1)^alpha dy over the candidate set.
SeminormReport weighted_sup_integral(const GridField& f, double alpha,
                                     std::span<const Point> z_candidates);
SeminormReport weighted_sup_integral(const GridField& f, double alpha);

// Averages over the dyadic annulus B_{2^{j+1}} \ B_{2^j} and the ball B_rho.
double annulus_average(const GridField& f, int j, bool zero_extend = false);
double ball_average(const GridField& f, double rho, bool zero_extend = false);
double annulus_average(const AnalyticField& f, int j, double cell);
double ball_average(const AnalyticField& f, double rho, double cell);

// Central-difference derivative D^sigma, iterated one axis at a time; the
// result lives on the grid shrunk by |sigma| cells per side.
struct DerivativeGrid {
    int order = 0;
    std::array<int, 2> sigma{0, 0};
    GridField samples;
};
DerivativeGrid derivative_grid(const GridField& f, std::array<int, 2> sigma);

std::vector<std::array<int, 2>> multi_indices(int order, int dim);

}  // namespace bgw
