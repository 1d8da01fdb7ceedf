#pragma once

#include <string>
#include <vector>

#include "nash/errors.hpp"
#include "nash/multipoly.hpp"

namespace nash {

/// Symbolic division data tying the image polynomial to the coefficients of
/// the monic factor and the division remainders. The full symbolic ring is
/// laid out as [t, a_1..a_d, b_{1,0}..b_{m,2d-1}, c_0..c_{2d-1}, S_1..S_m,
/// S~], where t is the distinguished series variable, C = t^d + a_1 t^{d-1}
/// + ... + a_d is the generic monic factor, the b and c rows hold the
/// remainder coefficients, and the S variables stand in for the cofactors.
/// The equations T_1..T_3d involve only the a, b, c block and cut out
/// exactly the coefficient tuples for which substituting C^2 S_j + w_j into
/// the image polynomial leaves no low-order remainder.
struct TSystem {
    int d = 0;
    int m = 0;
    std::vector<MultiPoly> T;  // 3d equations in the coefficient ring
    MultiPoly Wtilde;          // full-ring quotient by C^2
    MultiPoly Wbar;            // full-ring quotient by C

    int coeff_vars() const { return d * (2 * m + 3); }
    int full_vars() const { return coeff_vars() + m + 2; }

    int t_slot() const { return 0; }
    int a_slot(int k) const { return k; }                                    // k = 1..d
    int b_slot(int j, int l) const { return d + (j - 1) * 2 * d + l + 1; }   // j>=1, l>=0
    int c_slot(int l) const { return d + 2 * d * m + l + 1; }                // l = 0..2d-1
    int s_slot(int j) const { return coeff_vars() + j; }                     // j = 1..m
    int stilde_slot() const { return full_vars() - 1; }

    /// Coefficient-ring slot of a full-ring a/b/c slot.
    int coeff_slot(int full_slot) const { return full_slot - 1; }

    std::vector<std::string> coeff_names() const {
        std::vector<std::string> names;
        names.reserve(static_cast<size_t>(coeff_vars()));
        for (int k = 1; k <= d; ++k) names.push_back("a" + std::to_string(k));
        for (int j = 1; j <= m; ++j)
            for (int l = 0; l < 2 * d; ++l)
                names.push_back("b" + std::to_string(j) + "_" + std::to_string(l));
        for (int l = 0; l < 2 * d; ++l) names.push_back("c" + std::to_string(l));
        return names;
    }

    /// The generic monic factor C in the full ring.
    MultiPoly monic_factor() const {
        int nv = full_vars();
        MultiPoly C(nv);
        Exps lead(static_cast<size_t>(nv), 0);
        lead[static_cast<size_t>(t_slot())] = d;
        C.add_term(std::move(lead), GaussRat(1));
        for (int k = 1; k <= d; ++k) {
            Exps e(static_cast<size_t>(nv), 0);
            e[static_cast<size_t>(t_slot())] = d - k;
            e[static_cast<size_t>(a_slot(k))] = 1;
            C.add_term(std::move(e), GaussRat(1));
        }
        return C;
    }

    /// The generic remainder row w_j (j = 1..m) or, with j = 0, w~.
    MultiPoly remainder_row(int j) const {
        int nv = full_vars();
        MultiPoly w(nv);
        for (int l = 0; l < 2 * d; ++l) {
            Exps e(static_cast<size_t>(nv), 0);
            e[static_cast<size_t>(t_slot())] = 2 * d - 1 - l;
            e[static_cast<size_t>(j == 0 ? c_slot(l) : b_slot(j, l))] = 1;
            w.add_term(std::move(e), GaussRat(1));
        }
        return w;
    }

    /// Lifts a coefficient-ring polynomial into the full ring.
    MultiPoly lift(const MultiPoly& p) const {
        std::vector<int> where(static_cast<size_t>(coeff_vars()));
        for (int v = 0; v < coeff_vars(); ++v) where[static_cast<size_t>(v)] = v + 1;
        return p.map_vars(full_vars(), where);
    }

    /// Exact check of both defining identities against the image polynomial.
    bool verify_identities(const UniOverPoly& P_L) const;
};

namespace detail {

/// Substitutes the generic C^2 S_j + w_j rows into f (a polynomial in the
/// base variables y_1..y_m and the image variable z at slot m).
inline MultiPoly substitute_generic_rows(const MultiPoly& f, const TSystem& sys,
                                         const MultiPoly& C2) {
    std::vector<MultiPoly> images;
    images.reserve(static_cast<size_t>(sys.m) + 1);
    for (int j = 1; j <= sys.m; ++j)
        images.push_back(C2 * MultiPoly::variable(sys.full_vars(), sys.s_slot(j)) +
                         sys.remainder_row(j));
    images.push_back(C2 * MultiPoly::variable(sys.full_vars(), sys.stilde_slot()) +
                     sys.remainder_row(0));
    return f.compose(images);
}

}  // namespace detail

/// Builds the coefficient equations for an image polynomial P_L in m base
/// variables: substituting the generic rows into P_L and its z-derivative
/// and dividing by C^2 and C leaves remainders of degree < 2d and < d in t;
/// their t-coefficients are T_1..T_2d and T_2d+1..T_3d, and they involve
/// only the a, b, c variables.
inline TSystem build_T_system(const UniOverPoly& P_L, int m, int d) {
    if (d < 1) throw PreconditionError("build_T_system: factor degree must be positive");
    if (P_L.nvars != m + 1 || P_L.var != m)
        throw PreconditionError("build_T_system: image polynomial ring mismatch");

    TSystem sys;
    sys.d = d;
    sys.m = m;

    MultiPoly C = sys.monic_factor();
    MultiPoly C2 = C * C;
    MultiPoly A = detail::substitute_generic_rows(P_L.to_multipoly(), sys, C2);
    MultiPoly B = detail::substitute_generic_rows(P_L.derivative().to_multipoly(), sys, C2);

    auto [wt, remA] = divmod_in_var(A, C2, sys.t_slot());
    auto [wb, remB] = divmod_in_var(B, C, sys.t_slot());
    sys.Wtilde = std::move(wt);
    sys.Wbar = std::move(wb);

    std::vector<int> down(static_cast<size_t>(sys.full_vars()), -1);
    for (int v = 1; v <= sys.coeff_vars(); ++v) down[static_cast<size_t>(v)] = v - 1;

    sys.T.reserve(static_cast<size_t>(3 * d));
    auto take = [&](const MultiPoly& rem, int tdeg) {
        MultiPoly tk = rem.coeff_in_var(sys.t_slot(), tdeg);
        std::vector<bool> used = tk.used_vars();
        if (used[static_cast<size_t>(sys.t_slot())])
            throw InternalError("build_T_system: equation depends on the series variable");
        for (int j = 0; j <= m; ++j)
            if (used[static_cast<size_t>(j == m ? sys.stilde_slot() : sys.s_slot(j + 1))])
                throw InternalError("build_T_system: equation depends on a cofactor variable");
        sys.T.push_back(tk.map_vars(sys.coeff_vars(), down));
    };
    for (int k = 1; k <= 2 * d; ++k) take(remA, 2 * d - k);
    for (int k = 1; k <= d; ++k) take(remB, d - k);
    return sys;
}

inline bool TSystem::verify_identities(const UniOverPoly& P_L) const {
    MultiPoly C = monic_factor();
    MultiPoly C2 = C * C;
    MultiPoly A = detail::substitute_generic_rows(P_L.to_multipoly(), *this, C2);
    MultiPoly B = detail::substitute_generic_rows(P_L.derivative().to_multipoly(), *this, C2);
    MultiPoly t = MultiPoly::variable(full_vars(), t_slot());

    MultiPoly lhsA = A - Wtilde * C2;
    for (int k = 1; k <= 2 * d; ++k)
        lhsA -= t.pow(2 * d - k) * lift(T[static_cast<size_t>(k - 1)]);
    MultiPoly lhsB = B - Wbar * C;
    for (int k = 1; k <= d; ++k)
        lhsB -= t.pow(d - k) * lift(T[static_cast<size_t>(2 * d + k - 1)]);
    return lhsA.is_zero() && lhsB.is_zero();
}

}  // namespace nash
