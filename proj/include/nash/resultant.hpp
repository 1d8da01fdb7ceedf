#pragma once

#include <utility>
#include <vector>

#include "nash/errors.hpp"
#include "nash/multipoly.hpp"

namespace nash {

/// Sylvester matrix of f and g with respect to `var`; both degrees must
/// be positive. Rows hold shifted coefficient sequences, highest first.
inline std::vector<std::vector<MultiPoly>> sylvester_matrix(const UniOverPoly& f,
                                                            const UniOverPoly& g) {
    int m = f.degree(), n = g.degree();
    if (m < 1 || n < 1) throw PreconditionError("sylvester_matrix: degrees must be positive");
    if (f.var != g.var || f.nvars != g.nvars)
        throw PreconditionError("sylvester_matrix: ring mismatch");
    int N = m + n;
    std::vector<std::vector<MultiPoly>> s(static_cast<size_t>(N),
                                          std::vector<MultiPoly>(static_cast<size_t>(N),
                                                                 MultiPoly(f.nvars)));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s[r][r + k] = f.coeffs[static_cast<size_t>(k)];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s[n + r][r + k] = g.coeffs[static_cast<size_t>(k)];
    return s;
}

/// Exact determinant of a polynomial matrix by fraction-free Bareiss
/// elimination with row pivoting.
inline MultiPoly bareiss_det(std::vector<std::vector<MultiPoly>> b, int nvars) {
    int n = static_cast<int>(b.size());
    if (n == 0) return MultiPoly::constant(nvars, GaussRat(1));
    int sign = 1;
    MultiPoly prev = MultiPoly::constant(nvars, GaussRat(1));
    for (int k = 0; k + 1 < n; ++k) {
        if (b[k][k].is_zero()) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (!b[r][k].is_zero()) {
                    p = r;
                    break;
                }
            if (p < 0) return MultiPoly(nvars);
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(p)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                b[i][j] = exact_divide(b[k][k] * b[i][j] - b[i][k] * b[k][j], prev);
            b[i][k] = MultiPoly(nvars);
        }
        prev = b[k][k];
    }
    return sign > 0 ? b[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)]
                    : -b[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
}

/// Resultant of f and g with respect to `var`. For a constant (nonzero)
/// argument c the convention Res(c, g) = c^deg(g) applies; both arguments
/// constant is rejected.
inline MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, int var) {
    int df = f.degree_in(var), dg = g.degree_in(var);
    if (df <= 0 && dg <= 0)
        throw PreconditionError("resultant: both arguments constant in the variable");
    if (f.is_zero() || g.is_zero()) return MultiPoly(f.nvars());
    if (df <= 0) return f.pow(static_cast<unsigned>(dg));
    if (dg <= 0) return g.pow(static_cast<unsigned>(df));
    auto fu = UniOverPoly::from_multipoly(f, var);
    auto gu = UniOverPoly::from_multipoly(g, var);
    return bareiss_det(sylvester_matrix(fu, gu), f.nvars());
}

/// Discriminant of f in its distinguished variable:
/// (-1)^(d(d-1)/2) * Res(f, f') / lc(f), with d = deg(f) >= 1.
inline MultiPoly discriminant(const UniOverPoly& f) {
    int d = f.degree();
    if (d < 1) throw PreconditionError("discriminant: degree must be at least 1");
    if (d == 1) return exact_divide(f.lc(), f.lc());
    MultiPoly res = resultant(f.to_multipoly(), f.derivative().to_multipoly(), f.var);
    MultiPoly disc = exact_divide(res, f.lc());
    long swaps = static_cast<long>(d) * (d - 1) / 2;
    return (swaps % 2 == 0) ? disc : -disc;
}

namespace detail {

/// Pseudo-remainder prem(A, B) = lc(B)^(deg A - deg B + 1) * A mod B.
inline UniOverPoly prem(const UniOverPoly& A, const UniOverPoly& B) {
    int da = A.degree(), db = B.degree();
    if (db < 0) throw PreconditionError("prem: zero divisor");
    if (da < db) return A;
    UniOverPoly R = A;
    const MultiPoly& lcb = B.lc();
    int reps = 0;
    while (!R.is_zero() && R.degree() >= db) {
        int shift = R.degree() - db;
        MultiPoly lcr = R.lc();
        UniOverPoly next(R.var, R.nvars);
        next.coeffs.assign(static_cast<size_t>(R.degree()) + 1, MultiPoly(R.nvars));
        // lcb*R - lcr * x^shift * B, written on the coefficient array
        // indexed by degree.
        for (int k = 0; k <= R.degree(); ++k)
            next.coeffs[static_cast<size_t>(R.degree() - k)] =
                R.coeff_of(k) * lcb;
        for (int k = 0; k <= db; ++k) {
            int deg = k + shift;
            next.coeffs[static_cast<size_t>(R.degree() - deg)] -= lcr * B.coeff_of(k);
        }
        next.normalize();
        if (!next.is_zero() && next.degree() >= R.degree())
            throw InternalError("prem: no progress");
        R = next;
        ++reps;
    }
    int remaining = da - db + 1 - reps;
    if (remaining > 0) {
        MultiPoly s = lcb.pow(static_cast<unsigned>(remaining));
        for (auto& c : R.coeffs) c *= s;
    }
    return R;
}

}  // namespace detail

/// Last nonzero element of the subresultant remainder sequence of f and
/// g: a gcd of f and g up to a factor free of the distinguished variable.
inline UniOverPoly subresultant_gcd(UniOverPoly A, UniOverPoly B) {
    if (A.var != B.var || A.nvars != B.nvars)
        throw PreconditionError("subresultant_gcd: ring mismatch");
    A.normalize();
    B.normalize();
    if (A.is_zero()) return B;
    if (B.is_zero()) return A;
    if (A.degree() < B.degree()) std::swap(A, B);
    MultiPoly g = MultiPoly::constant(A.nvars, GaussRat(1));
    MultiPoly h = g;
    while (true) {
        int delta = A.degree() - B.degree();
        UniOverPoly R = detail::prem(A, B);
        R.normalize();
        if (R.is_zero()) return B;
        MultiPoly divisor = g * h.pow(static_cast<unsigned>(delta));
        A = std::move(B);
        B = UniOverPoly(A.var, A.nvars);
        B.coeffs.reserve(R.coeffs.size());
        for (const auto& c : R.coeffs) B.coeffs.push_back(exact_divide(c, divisor));
        g = A.lc();
        if (delta >= 1) {
            MultiPoly num = g.pow(static_cast<unsigned>(delta));
            h = (delta == 1) ? num : exact_divide(num, h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
}

/// Monic squarefree part (product of the distinct irreducible factors).
/// The leading coefficient of f must be a nonzero constant.
inline UniOverPoly squarefree_part(const UniOverPoly& f) {
    UniOverPoly a = f;
    a.normalize();
    if (a.is_zero()) throw PreconditionError("squarefree_part: zero polynomial");
    if (a.lc().degree() != 0)
        throw PreconditionError("squarefree_part: leading coefficient must be constant");
    a.monicize();
    if (a.degree() < 2) return a;
    UniOverPoly g = subresultant_gcd(a, a.derivative());
    g.normalize();
    if (g.degree() < 1) return a;
    // For monic a, the last subresultant equals lc * (monic gcd), with the
    // monic gcd still having polynomial coefficients; strip the factor.
    MultiPoly lead = g.lc();
    for (auto& c : g.coeffs) c = exact_divide(c, lead);
    auto [q, r] = divmod_in_var(a.to_multipoly(), g.to_multipoly(), a.var);
    if (!r.is_zero()) throw InternalError("squarefree_part: gcd does not divide input");
    UniOverPoly out = UniOverPoly::from_multipoly(q, a.var);
    out.monicize();
    return out;
}

}  // namespace nash
