#include "bgw/dyadic_coeffs.hpp"

#include <stdexcept>

namespace bgw {

namespace {

Rational seq_at(const DyadicSequence& seq, int l) {
    auto it = seq.find(l);
    if (it == seq.end())
        throw std::out_of_range("dyadic sequence missing index l=" + std::to_string(l));
    return it->second;
}

}  // namespace

DyadicCoefficients solve_dyadic_system(int k) {
    if (k < 0) throw std::invalid_argument("solve_dyadic_system: k must be >= 0");

    const int n = k + 1;  // unknowns a_1, ..., a_{k+1}
    // Row l (l = 0..k):  sum_{j=1}^{k+1} 2^{jl} a_j = -1   (a_0 = 1 moved right).
    std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(n + 1));
    for (int l = 0; l < n; ++l) {
        for (int j = 1; j <= n; ++j) aug[l][j - 1] = pow2_rational(static_cast<long>(j) * l);
        aug[l][n] = -1;
    }

    // Exact Gaussian elimination with nonzero-pivot selection.
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (aug[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw std::logic_error("singular dyadic system");  // cannot happen: Vandermonde nodes distinct
        std::swap(aug[col], aug[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            Rational factor = aug[r][col] / aug[col][col];
            for (int c = col; c <= n; ++c) aug[r][c] -= factor * aug[col][c];
        }
    }

    DyadicCoefficients out;
    out.k = k;
    out.a.resize(k + 2);
    out.a[0] = 1;
    for (int j = 1; j <= n; ++j) out.a[j] = aug[j - 1][n] / aug[j - 1][j - 1];

    out.a_combined = 0;
    for (int j = 0; j <= k; ++j) out.a_combined += Rational(k - j + 1) * out.a[j];
    return out;
}

Rational combined_coefficient_closed_form(int k) {
    if (k < 0) throw std::invalid_argument("combined_coefficient_closed_form: k must be >= 0");
    Rational prod = 1;
    for (int l = 1; l <= k; ++l) prod *= (pow2_rational(l) - 1);
    return pow2_rational(-static_cast<long>(k) * (k + 1) / 2) * prod;
}

TelescopingSides telescoping_combine(const DyadicCoefficients& coeffs, const Rational& b,
                                     const DyadicSequence& b_seq, int m) {
    if (m < 1) throw std::invalid_argument("telescoping_combine: m must be >= 1");
    const int k = coeffs.k;

    TelescopingSides sides;
    sides.lhs = 0;
    for (int l = -m; l <= m - 1; ++l) {
        Rational inner = 0;
        for (int j = 0; j <= k + 1; ++j) inner += coeffs.a[j] * seq_at(b_seq, j + l);
        sides.lhs += inner;
    }

    sides.rhs = 0;
    for (int l = m; l <= k + m; ++l) {
        Rational tail = 0;
        for (int j = l - m + 1; j <= k + 1; ++j) tail += coeffs.a[j];
        sides.rhs += tail * seq_at(b_seq, l);
    }
    for (int l = -m; l <= k - m; ++l) {
        Rational head = 0;
        for (int j = 0; j <= l + m; ++j) head += coeffs.a[j];
        sides.rhs += head * (seq_at(b_seq, l) - b);
    }
    sides.rhs += coeffs.a_combined * b;
    return sides;
}

TriangleBound triangle_bound(const DyadicCoefficients& coeffs, const Rational& b,
                             const DyadicSequence& b_seq, int m) {
    if (m < 1) throw std::invalid_argument("triangle_bound: m must be >= 1");
    const int k = coeffs.k;
    if (coeffs.a_combined == 0) throw std::logic_error("triangle_bound: zero combined coefficient");

    const Rational abs_sum = coeffs.abs_coefficient_sum();
    const Rational inv_abs_a = Rational(1) / abs_rational(coeffs.a_combined);

    Rational oscillation = 0;
    for (int l = -m; l <= k - m; ++l) oscillation += abs_rational(seq_at(b_seq, l) - b);

    Rational middle = 0;
    for (int l = -m; l <= m - 1; ++l) {
        Rational inner = 0;
        for (int j = 0; j <= k + 1; ++j) inner += coeffs.a[j] * seq_at(b_seq, j + l);
        middle += abs_rational(inner);
    }

    Rational tail = 0;
    for (int l = m; l <= k + m; ++l) tail += abs_rational(seq_at(b_seq, l));

    TriangleBound out;
    out.bound_value = inv_abs_a * (abs_sum * oscillation + middle + abs_sum * tail);
    out.holds = abs_rational(b) <= out.bound_value;
    return out;
}

}  // namespace bgw
