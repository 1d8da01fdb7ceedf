#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "nash/errors.hpp"
#include "nash/linalg.hpp"
#include "nash/rational.hpp"

namespace nash {

/// Exponent vector of a monomial; length equals the ring's variable count.
using Exps = std::vector<int>;

inline int total_degree(const Exps& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Graded lexicographic order: higher total degree wins, ties broken
/// lexicographically with the first variable strongest.
struct GrlexLess {
    bool operator()(const Exps& a, const Exps& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

/// Sparse multivariate polynomial with exact Gaussian rational
/// coefficients. Terms are kept in ascending graded-lex order and zero
/// coefficients are never stored.
class MultiPoly {
public:
    using TermMap = std::map<Exps, GaussRat, GrlexLess>;

    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, const GaussRat& c) {
        MultiPoly p(nvars);
        p.add_term(Exps(nvars, 0), c);
        return p;
    }

    static MultiPoly variable(int nvars, int var) {
        check_var(nvars, var);
        MultiPoly p(nvars);
        Exps e(nvars, 0);
        e[var] = 1;
        p.add_term(e, GaussRat(1));
        return p;
    }

    static MultiPoly monomial(Exps e, const GaussRat& c) {
        MultiPoly p(static_cast<int>(e.size()));
        p.add_term(std::move(e), c);
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return t_.empty(); }
    size_t nterms() const { return t_.size(); }
    const TermMap& terms() const { return t_; }

    GaussRat coeff(const Exps& e) const {
        auto it = t_.find(e);
        return it == t_.end() ? GaussRat(0) : it->second;
    }

    GaussRat constant_term() const { return coeff(Exps(nvars_, 0)); }

    void add_term(Exps e, const GaussRat& c) {
        if (static_cast<int>(e.size()) != nvars_)
            throw PreconditionError("MultiPoly: exponent arity mismatch");
        if (c.is_zero()) return;
        auto [it, fresh] = t_.emplace(std::move(e), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    bool operator==(const MultiPoly& o) const { return nvars_ == o.nvars_ && t_ == o.t_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
        return r;
    }

    MultiPoly operator+(const MultiPoly& o) const {
        check_same_ring(o);
        MultiPoly r = *this;
        for (const auto& [e, c] : o.t_) r.add_term(e, c);
        return r;
    }

    MultiPoly operator-(const MultiPoly& o) const {
        check_same_ring(o);
        MultiPoly r = *this;
        for (const auto& [e, c] : o.t_) r.add_term(e, -c);
        return r;
    }

    MultiPoly operator*(const MultiPoly& o) const {
        check_same_ring(o);
        MultiPoly r(nvars_);
        Exps e(nvars_);
        for (const auto& [ea, ca] : t_)
            for (const auto& [eb, cb] : o.t_) {
                for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    MultiPoly operator*(const GaussRat& s) const {
        if (s.is_zero()) return MultiPoly(nvars_);
        MultiPoly r(nvars_);
        for (const auto& [e, c] : t_) r.t_.emplace(e, c * s);
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly pow(unsigned e) const {
        MultiPoly acc = constant(nvars_, GaussRat(1));
        MultiPoly base = *this;
        while (e) {
            if (e & 1) acc *= base;
            if (e >>= 1) base *= base;
        }
        return acc;
    }

    /// Total degree; -1 for the zero polynomial.
    int degree() const { return t_.empty() ? -1 : total_degree(t_.rbegin()->first); }

    int degree_in(int var) const {
        check_var(nvars_, var);
        int d = -1;
        for (const auto& [e, c] : t_) d = std::max(d, e[var]);
        return d;
    }

    MultiPoly derivative(int var) const {
        check_var(nvars_, var);
        MultiPoly r(nvars_);
        for (const auto& [e, c] : t_) {
            if (e[var] == 0) continue;
            Exps e2 = e;
            --e2[var];
            r.add_term(std::move(e2), c * GaussRat(e[var]));
        }
        return r;
    }

    /// Coefficient of var^k as a polynomial in the same ring (the slot of
    /// var is zeroed out in every returned exponent).
    MultiPoly coeff_in_var(int var, int k) const {
        check_var(nvars_, var);
        MultiPoly r(nvars_);
        for (const auto& [e, c] : t_) {
            if (e[var] != k) continue;
            Exps e2 = e;
            e2[var] = 0;
            r.add_term(std::move(e2), c);
        }
        return r;
    }

    GaussRat eval(const std::vector<GaussRat>& x) const {
        if (static_cast<int>(x.size()) != nvars_)
            throw PreconditionError("MultiPoly: evaluation arity mismatch");
        GaussRat acc(0);
        for (const auto& [e, c] : t_) {
            GaussRat m = c;
            for (int i = 0; i < nvars_; ++i)
                if (e[i]) m *= x[i].pow(static_cast<unsigned long>(e[i]));
            acc += m;
        }
        return acc;
    }

    /// Substitutes images[i] for variable i; images live in a common ring.
    MultiPoly compose(const std::vector<MultiPoly>& images) const {
        if (static_cast<int>(images.size()) != nvars_)
            throw PreconditionError("MultiPoly: substitution arity mismatch");
        int m = images.empty() ? 0 : images[0].nvars();
        for (const auto& g : images)
            if (g.nvars() != m) throw PreconditionError("MultiPoly: substitution ring mismatch");
        std::vector<std::vector<MultiPoly>> powers(nvars_);
        MultiPoly acc(m);
        for (const auto& [e, c] : t_) {
            MultiPoly term = MultiPoly::constant(m, c);
            for (int i = 0; i < nvars_; ++i) {
                if (!e[i]) continue;
                auto& cache = powers[i];
                if (cache.empty()) cache.push_back(MultiPoly::constant(m, GaussRat(1)));
                while (static_cast<int>(cache.size()) <= e[i])
                    cache.push_back(cache.back() * images[i]);
                term *= cache[e[i]];
            }
            acc += term;
        }
        return acc;
    }

    /// Linear substitution x_i -> sum_j M(i,j) x_j. M has nvars rows; the
    /// column count gives the variable count of the result ring.
    MultiPoly substitute_linear(const QMatrix& M) const {
        if (M.rows() != nvars_) throw PreconditionError("MultiPoly: matrix row count mismatch");
        std::vector<MultiPoly> images;
        images.reserve(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            MultiPoly g(M.cols());
            for (int j = 0; j < M.cols(); ++j) {
                if (M.at(i, j) == 0) continue;
                Exps e(M.cols(), 0);
                e[j] = 1;
                g.add_term(std::move(e), GaussRat(mpq_class(M.at(i, j))));
            }
            images.push_back(std::move(g));
        }
        return compose(images);
    }

    /// Moves variable i of this ring to slot where[i] of a ring with
    /// new_nvars variables; `where` must be injective.
    MultiPoly map_vars(int new_nvars, const std::vector<int>& where) const {
        if (static_cast<int>(where.size()) != nvars_)
            throw PreconditionError("MultiPoly: variable map arity mismatch");
        MultiPoly r(new_nvars);
        for (const auto& [e, c] : t_) {
            Exps e2(new_nvars, 0);
            for (int i = 0; i < nvars_; ++i) {
                if (!e[i]) continue;
                check_var(new_nvars, where[i]);
                e2[where[i]] += e[i];
            }
            r.add_term(std::move(e2), c);
        }
        return r;
    }

    std::vector<bool> used_vars() const {
        std::vector<bool> u(nvars_, false);
        for (const auto& [e, c] : t_)
            for (int i = 0; i < nvars_; ++i)
                if (e[i]) u[i] = true;
        return u;
    }

private:
    static void check_var(int nvars, int var) {
        if (var < 0 || var >= nvars) throw PreconditionError("MultiPoly: variable out of range");
    }

    void check_same_ring(const MultiPoly& o) const {
        if (nvars_ != o.nvars_) throw PreconditionError("MultiPoly: ring mismatch");
    }

    int nvars_;
    TermMap t_;
};

inline MultiPoly operator*(const GaussRat& s, const MultiPoly& p) { return p * s; }

/// Quotient and remainder of division by a polynomial whose leading
/// coefficient in `var` is a nonzero constant: f = q*g + r with
/// deg_var(r) < deg_var(g).
inline std::pair<MultiPoly, MultiPoly> divmod_in_var(const MultiPoly& f, const MultiPoly& g,
                                                     int var) {
    if (g.is_zero()) throw PreconditionError("divmod_in_var: zero divisor");
    int dg = g.degree_in(var);
    MultiPoly lcg = g.coeff_in_var(var, dg);
    if (lcg.degree() != 0)
        throw PreconditionError("divmod_in_var: divisor leading coefficient must be constant");
    GaussRat inv_lc = lcg.constant_term().inv();
    MultiPoly q(f.nvars()), r = f;
    for (int dr = r.degree_in(var); dr >= dg; dr = r.degree_in(var)) {
        MultiPoly top = r.coeff_in_var(var, dr);
        if (top.is_zero()) break;
        Exps shift(f.nvars(), 0);
        shift[var] = dr - dg;
        MultiPoly step = top * inv_lc * MultiPoly::monomial(shift, GaussRat(1));
        q += step;
        r -= step * g;
        if (r.degree_in(var) == dr)
            throw InternalError("divmod_in_var: no progress");
    }
    return {q, r};
}

/// Exact multivariate division; throws InternalError when g does not
/// divide f (callers only use it where divisibility is guaranteed).
inline MultiPoly exact_divide(const MultiPoly& f, const MultiPoly& g) {
    if (g.is_zero()) throw PreconditionError("exact_divide: zero divisor");
    MultiPoly q(f.nvars()), r = f;
    const auto& glead = *g.terms().rbegin();
    while (!r.is_zero()) {
        const auto& rlead = *r.terms().rbegin();
        Exps e(f.nvars());
        for (int i = 0; i < f.nvars(); ++i) {
            e[i] = rlead.first[i] - glead.first[i];
            if (e[i] < 0) throw InternalError("exact_divide: not divisible");
        }
        MultiPoly step = MultiPoly::monomial(std::move(e), rlead.second / glead.second);
        q += step;
        r -= step * g;
    }
    return q;
}

/// View of a polynomial as univariate in one distinguished variable.
/// Coefficients are polynomials in the remaining variables of the same
/// ring (their slot for `var` is always zero); stored highest degree
/// first.
struct UniOverPoly {
    int var = 0;
    int nvars = 0;
    std::vector<MultiPoly> coeffs;

    UniOverPoly() = default;
    UniOverPoly(int var_, int nvars_) : var(var_), nvars(nvars_) {}

    static UniOverPoly from_multipoly(const MultiPoly& f, int var) {
        UniOverPoly u(var, f.nvars());
        int d = f.degree_in(var);
        if (d < 0) return u;
        u.coeffs.reserve(d + 1);
        for (int k = d; k >= 0; --k) u.coeffs.push_back(f.coeff_in_var(var, k));
        return u;
    }

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const { return coeffs.empty(); }

    const MultiPoly& lc() const {
        if (coeffs.empty()) throw PreconditionError("UniOverPoly: leading coefficient of zero");
        return coeffs.front();
    }

    bool is_monic() const {
        return !coeffs.empty() && lc().degree() == 0 && lc().constant_term().is_one();
    }

    /// Coefficient of var^k.
    const MultiPoly& coeff_of(int k) const {
        if (k < 0 || k > degree())
            throw PreconditionError("UniOverPoly: coefficient index out of range");
        return coeffs[static_cast<size_t>(degree() - k)];
    }

    MultiPoly to_multipoly() const {
        MultiPoly f(nvars);
        int d = degree();
        for (int k = 0; k <= d; ++k) {
            Exps e(nvars, 0);
            e[var] = d - k;
            f += coeffs[static_cast<size_t>(k)] * MultiPoly::monomial(std::move(e), GaussRat(1));
        }
        return f;
    }

    UniOverPoly derivative() const {
        UniOverPoly r(var, nvars);
        int d = degree();
        for (int k = 0; k < d; ++k)
            r.coeffs.push_back(coeffs[static_cast<size_t>(k)] * GaussRat(d - k));
        r.normalize();
        return r;
    }

    /// Drops leading zero coefficients.
    void normalize() {
        size_t i = 0;
        while (i < coeffs.size() && coeffs[i].is_zero()) ++i;
        if (i) coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(i));
    }

    /// Divides through by the leading coefficient, which must be constant.
    void monicize() {
        if (is_zero()) throw PreconditionError("UniOverPoly: cannot monicize zero");
        if (lc().degree() != 0)
            throw PreconditionError("UniOverPoly: leading coefficient is not constant");
        GaussRat inv = lc().constant_term().inv();
        for (auto& c : coeffs) c = c * inv;
    }
};

}  // namespace nash
