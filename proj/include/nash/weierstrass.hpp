#pragma once

#include <map>
#include <optional>
#include <vector>

#include "nash/errors.hpp"
#include "nash/jet.hpp"

namespace nash {

/// Order of vanishing of u restricted to the axis of `var`; empty when
/// the restriction vanishes identically to the truncation order.
inline std::optional<int> xn_regular_order_opt(const Jet& u, int var) {
    Jet axis = u.restrict_to_axis(var);
    int best = -1;
    for (const auto& [e, c] : axis.terms()) {
        int k = e[static_cast<size_t>(var)];
        if (best < 0 || k < best) best = k;
    }
    if (best < 0) return std::nullopt;
    return best;
}

/// Same, but failure to be regular is an error.
inline int xn_regular_order(const Jet& u, int var) {
    auto d = xn_regular_order_opt(u, var);
    if (!d)
        throw PreconditionError(
            "xn_regular_order: series is not regular in the distinguished variable");
    return *d;
}

namespace detail {

/// Dense univariate series with complex coefficients, index = power.
using USeries = std::vector<Complex>;

inline USeries useries_zero(int len, mpfr_prec_t prec) {
    return USeries(static_cast<size_t>(len), Complex(prec));
}

inline USeries useries_mul(const USeries& a, const USeries& b, int maxdeg, mpfr_prec_t prec) {
    USeries r = useries_zero(maxdeg + 1, prec);
    for (size_t i = 0; i < a.size(); ++i) {
        if (static_cast<int>(i) > maxdeg) break;
        for (size_t j = 0; j < b.size(); ++j) {
            if (static_cast<int>(i + j) > maxdeg) break;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

/// Reciprocal series mod x^(maxdeg+1); e[0] must be invertible.
inline USeries useries_inverse(const USeries& e, int maxdeg, mpfr_prec_t prec) {
    USeries inv = useries_zero(maxdeg + 1, prec);
    inv[0] = e[0].inv();
    for (int t = 1; t <= maxdeg; ++t) {
        Complex acc(prec);
        for (int s = 1; s <= t; ++s) {
            if (static_cast<size_t>(s) >= e.size()) break;
            acc += e[static_cast<size_t>(s)] * inv[static_cast<size_t>(t - s)];
        }
        inv[static_cast<size_t>(t)] = -(acc * inv[0]);
    }
    return inv;
}

}  // namespace detail

/// Result of Weierstrass preparation: u = unit * W with W monic of degree
/// d in the distinguished variable and W(0,...,0,x_n) = x_n^d.
struct WeierstrassFactor {
    Jet unit;
    JetPoly w;
    int d = 0;
};

/// Prepares an x_n-regular jet. Division of x_n^d by u is organized level
/// by level in the total degree of the remaining variables; each level
/// only needs quotient data from strictly lower levels.
inline WeierstrassFactor weierstrass_prepare(const Jet& u, int var) {
    int D = u.order();
    int n = u.nvars();
    mpfr_prec_t prec = u.prec();
    double hz = u.hard_zero();
    int d = xn_regular_order(u, var);
    if (d > D) throw InternalError("weierstrass_prepare: order above truncation");

    // The level recursion consumes up to d slots of the distinguished
    // series per level of the remaining variables, so give every series
    // enough headroom to keep all coefficients of joint degree <= D
    // exact for in-range polynomial input.
    int L = std::max(D, d * (D + 1));

    // Group the series by the exponents of the remaining variables.
    std::map<Exps, detail::USeries, GrlexLess> levels;
    for (const auto& [e, c] : u.terms()) {
        Exps key;
        key.reserve(e.size() - 1);
        for (size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != var) key.push_back(e[i]);
        auto [it, fresh] = levels.emplace(key, detail::USeries());
        if (fresh) it->second = detail::useries_zero(L + 1, prec);
        it->second[static_cast<size_t>(e[static_cast<size_t>(var)])] = c;
    }

    Exps zero_key(static_cast<size_t>(n - 1), 0);
    auto it0 = levels.find(zero_key);
    if (it0 == levels.end())
        throw InternalError("weierstrass_prepare: missing axis restriction");
    detail::USeries e_series = detail::useries_zero(L + 1, prec);
    for (int t = d; t <= L; ++t) e_series[static_cast<size_t>(t - d)] = it0->second[static_cast<size_t>(t)];
    detail::USeries einv = detail::useries_inverse(e_series, L, prec);

    std::map<Exps, detail::USeries, GrlexLess> q;
    JetPoly w(var, n);
    w.coeffs.assign(static_cast<size_t>(d) + 1, Jet(n - 1, D, prec, hz));
    w.coeffs.front() = Jet::constant(n - 1, D, Complex::of(1.0, 0.0, prec), prec, hz);

    for (const Exps& alpha : all_exponents(n - 1, D)) {
        detail::USeries g = detail::useries_zero(L + 1, prec);
        if (alpha == zero_key) g[static_cast<size_t>(d)] = Complex::of(1.0, 0.0, prec);
        for (const auto& [a1, qa] : q) {
            bool le = true;
            Exps a2(alpha.size());
            for (size_t i = 0; i < alpha.size() && le; ++i) {
                a2[i] = alpha[i] - a1[i];
                if (a2[i] < 0) le = false;
            }
            if (!le || a1 == alpha) continue;
            auto itu = levels.find(a2);
            if (itu == levels.end()) continue;
            detail::USeries prod = detail::useries_mul(qa, itu->second, L, prec);
            for (int t = 0; t <= L; ++t) g[static_cast<size_t>(t)] -= prod[static_cast<size_t>(t)];
        }
        // Split at degree d: the low part joins W, the rest feeds the
        // quotient.
        detail::USeries tail = detail::useries_zero(L + 1, prec);
        for (int t = d; t <= L; ++t) tail[static_cast<size_t>(t - d)] = g[static_cast<size_t>(t)];
        q.emplace(alpha, detail::useries_mul(tail, einv, L, prec));
        for (int k = 0; k < d; ++k) {
            // Coefficient of x_n^k contributes to W at slot d - k.
            w.coeffs[static_cast<size_t>(d - k)].add_coeff(alpha, -g[static_cast<size_t>(k)]);
        }
    }

    Jet qjet(n, D, prec, hz);
    std::vector<int> where;
    for (int i = 0; i < n; ++i)
        if (i != var) where.push_back(i);
    for (const auto& [alpha, qa] : q) {
        for (int t = 0; t <= D; ++t) {
            if (total_degree(alpha) + t > D) break;
            Exps e(static_cast<size_t>(n), 0);
            for (size_t i = 0; i < alpha.size(); ++i) e[static_cast<size_t>(where[i])] = alpha[i];
            e[static_cast<size_t>(var)] = t;
            qjet.add_coeff(e, qa[static_cast<size_t>(t)]);
        }
    }

    // A truncation of u at order V only pins the factors down to joint
    // degree V/d: dividing by a degree-d distinguished polynomial can
    // divide the order of a perturbation by d.
    int vw = d > 0 ? (u.valid() < 0 ? -1 : u.valid() / d) : u.valid();
    Jet unit = qjet.invert_unit();
    unit.set_valid(d > 0 ? vw - 1 : u.valid());
    for (size_t k = 1; k < w.coeffs.size(); ++k)
        w.coeffs[k].set_valid(vw);
    return WeierstrassFactor{std::move(unit), std::move(w), d};
}

/// Quotient and remainder of f by W^power where W is monic in its
/// distinguished variable: f = H * W^power + r with deg(r) < power*deg(W).
struct WeierstrassDivision {
    Jet quotient;
    JetPoly remainder;
};

inline WeierstrassDivision weierstrass_divide(const Jet& f, const JetPoly& w, int power) {
    if (power < 1) throw PreconditionError("weierstrass_divide: power must be positive");
    if (w.coeffs.empty()) throw PreconditionError("weierstrass_divide: empty divisor");
    if (!w.is_monic()) throw PreconditionError("weierstrass_divide: divisor is not monic");
    int var = w.var;
    int D = f.order();
    mpfr_prec_t prec = f.prec();
    double hz = f.hard_zero();

    JetPoly g = (power == 1) ? w : w.pow(static_cast<unsigned>(power));
    int pd = g.degree();

    JetPoly fc = JetPoly::extract(f, var);
    int df = fc.degree();
    std::vector<Jet> rem;
    rem.reserve(static_cast<size_t>(std::max(df, pd - 1)) + 1);
    for (int k = 0; k <= std::max(df, pd - 1); ++k)
        rem.push_back(k <= df ? fc.coeff_of(k) : Jet(f.nvars() - 1, D, prec, hz));

    std::vector<Jet> quot(static_cast<size_t>(std::max(df - pd + 1, 0)),
                          Jet(f.nvars() - 1, D, prec, hz));
    bool exact_power_divisor = true;
    for (int j = 1; j <= pd && exact_power_divisor; ++j)
        if (!g.coeff_of(pd - j).stored_zero()) exact_power_divisor = false;

    for (int k = df; k >= pd; --k) {
        Jet c = rem[static_cast<size_t>(k)];
        quot[static_cast<size_t>(k - pd)] = c;
        if (c.stored_zero()) continue;
        for (int j = 1; j <= pd; ++j)
            rem[static_cast<size_t>(k - j)] -= c * g.coeff_of(pd - j);
    }

    // Division by an exact power of the variable is lossless; a general
    // distinguished divisor of degree pd determines the remainder only
    // to joint degree base/(pd) for the same reason as in preparation.
    int base = std::min(f.valid(), g.min_coeff_valid());
    int rvalid = exact_power_divisor ? f.valid() : (base < 0 ? -1 : base / pd);
    JetPoly hp(var, f.nvars());
    for (int k = static_cast<int>(quot.size()) - 1; k >= 0; --k)
        hp.coeffs.push_back(quot[static_cast<size_t>(k)]);
    if (hp.coeffs.empty()) hp.coeffs.push_back(Jet(f.nvars() - 1, D, prec, hz));
    Jet quotient = hp.to_jet(D);
    quotient.set_valid(exact_power_divisor ? f.valid() - pd : rvalid - pd);

    JetPoly remainder(var, f.nvars());
    for (int k = pd - 1; k >= 0; --k) {
        Jet c = rem[static_cast<size_t>(k)];
        c.set_valid(std::min(c.valid(), rvalid));
        remainder.coeffs.push_back(std::move(c));
    }
    if (remainder.coeffs.empty())
        remainder.coeffs.push_back(Jet(f.nvars() - 1, D, prec, hz));
    return WeierstrassDivision{std::move(quotient), std::move(remainder)};
}

}  // namespace nash
