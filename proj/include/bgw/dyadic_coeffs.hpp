#pragma once

#include <map>
#include <utility>
#include <vector>

#include "bgw/rational.hpp"

namespace bgw {

// Coefficient tuple (a_0, ..., a_{k+1}) with a_0 = 1 solving
//   sum_{j=0}^{k+1} a_j 2^{jl} = 0   for l = 0, ..., k,
// together with the combined scalar  a = sum_{j=0}^{k} (k-j+1) a_j.
// The combination annihilates dyadic-scaled averages of polynomials of
// degree <= k, which is what makes the telescoping identity usable.
struct DyadicCoefficients {
    int k = 0;
    std::vector<Rational> a;  // k+2 entries
    Rational a_combined;

    Rational abs_coefficient_sum() const {
        Rational s = 0;
        for (const auto& c : a) s += abs_rational(c);
        return s;
    }
};

// Unique exact solution with a_0 = 1, found by Gaussian elimination over
// the rationals. k = 0 is admitted: the system degenerates to a_0 + a_1 = 0
// and the combination becomes the plain first difference.
DyadicCoefficients solve_dyadic_system(int k);

// Closed-form value of the combined scalar,
//   a = (-1)^k 2^{-k(k+1)/2} prod_{l=1}^{k} (1 - 2^l)
//     =        2^{-k(k+1)/2} prod_{l=1}^{k} (2^l - 1),
// kept as an independent cross-check of the elimination route.
Rational combined_coefficient_closed_form(int k);

// Sequence b_l on l = -m, ..., k+m. Missing indices are an error.
using DyadicSequence = std::map<int, Rational>;

struct TelescopingSides {
    Rational lhs;
    Rational rhs;
};

// Both sides of the telescoping identity
//   sum_{l=-m}^{m-1} [ sum_j a_j b_{j+l} ]
//     = sum_{l=m}^{k+m} [ sum_{j=l-m+1}^{k+1} a_j ] b_l
//     + sum_{l=-m}^{k-m} [ sum_{j=0}^{l+m} a_j ] (b_l - b)
//     + a * b,
// evaluated independently in exact arithmetic; they must agree exactly.
TelescopingSides telescoping_combine(const DyadicCoefficients& coeffs, const Rational& b,
                                     const DyadicSequence& b_seq, int m);

struct TriangleBound {
    Rational bound_value;
    bool holds = false;
};

// Triangle-inequality bound on |b| extracted from the telescoping identity:
//   |b| <= (1/|a|) [sum_j |a_j|] sum_{l=-m}^{k-m} |b_l - b|
//        + (1/|a|) sum_{l=-m}^{m-1} |sum_j a_j b_{j+l}|
//        + (1/|a|) [sum_j |a_j|] sum_{l=m}^{k+m} |b_l|.
TriangleBound triangle_bound(const DyadicCoefficients& coeffs, const Rational& b,
                             const DyadicSequence& b_seq, int m);

}  // namespace bgw
