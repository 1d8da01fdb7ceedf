#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "nash/bigfloat.hpp"
#include "nash/errors.hpp"
#include "nash/multipoly.hpp"

namespace nash {

/// All exponent vectors with the given variable count and total degree at
/// most maxdeg, ascending in graded-lex order.
inline std::vector<Exps> all_exponents(int nvars, int maxdeg) {
    std::vector<Exps> out;
    Exps cur(static_cast<size_t>(nvars), 0);
    if (nvars == 0) {
        out.push_back(cur);
        return out;
    }
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == nvars - 1) {
            for (int e = 0; e <= left; ++e) {
                cur[static_cast<size_t>(pos)] = e;
                out.push_back(cur);
            }
            cur[static_cast<size_t>(pos)] = 0;
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[static_cast<size_t>(pos)] = e;
            self(self, pos + 1, left - e);
        }
        cur[static_cast<size_t>(pos)] = 0;
    };
    rec(rec, 0, maxdeg);
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

/// Truncated multivariate power series with arbitrary-precision complex
/// coefficients. `order` is the truncation degree: terms of total degree
/// above it are never stored. `valid` marks up to which total degree the
/// stored coefficients are meaningful for the underlying analytic object;
/// operations propagate it conservatively. Coefficients whose real and
/// imaginary parts both fall below `hard_zero` in absolute value are
/// dropped.
class Jet {
public:
    using TermMap = std::map<Exps, Complex, GrlexLess>;

    Jet(int nvars, int order, mpfr_prec_t prec = 128, double hard_zero = 1e-30)
        : nvars_(nvars), order_(order), valid_(order), prec_(prec), hard_zero_(hard_zero) {
        if (nvars < 0 || order < 0) throw PreconditionError("Jet: bad shape");
    }

    static Jet constant(int nvars, int order, const Complex& c, mpfr_prec_t prec = 128,
                        double hard_zero = 1e-30) {
        Jet j(nvars, order, prec, hard_zero);
        j.set_coeff(Exps(static_cast<size_t>(nvars), 0), c);
        return j;
    }

    static Jet coordinate(int nvars, int order, int var, mpfr_prec_t prec = 128,
                          double hard_zero = 1e-30) {
        Jet j(nvars, order, prec, hard_zero);
        if (var < 0 || var >= nvars) throw PreconditionError("Jet: variable out of range");
        if (order >= 1) {
            Exps e(static_cast<size_t>(nvars), 0);
            e[static_cast<size_t>(var)] = 1;
            j.set_coeff(e, Complex::of(1.0, 0.0, prec));
        }
        return j;
    }

    /// Truncates an exact polynomial into a fully valid jet.
    static Jet from_poly(const MultiPoly& p, int order, mpfr_prec_t prec = 128,
                         double hard_zero = 1e-30) {
        Jet j(p.nvars(), order, prec, hard_zero);
        for (const auto& [e, c] : p.terms()) {
            if (total_degree(e) > order) continue;
            j.set_coeff(e, Complex::of_rat(c, prec));
        }
        return j;
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    int valid() const { return valid_; }
    mpfr_prec_t prec() const { return prec_; }
    double hard_zero() const { return hard_zero_; }
    const TermMap& terms() const { return t_; }
    bool stored_zero() const { return t_.empty(); }

    void set_valid(int v) { valid_ = std::clamp(v, -1, order_); }

    Complex coeff(const Exps& e) const {
        auto it = t_.find(e);
        return it == t_.end() ? Complex(prec_) : it->second;
    }

    Complex constant_term() const { return coeff(Exps(static_cast<size_t>(nvars_), 0)); }

    void set_coeff(const Exps& e, const Complex& c) {
        if (static_cast<int>(e.size()) != nvars_)
            throw PreconditionError("Jet: exponent arity mismatch");
        if (total_degree(e) > order_) return;
        if (negligible(c))
            t_.erase(e);
        else
            t_[e] = c;
    }

    void add_coeff(const Exps& e, const Complex& c) { set_coeff(e, coeff(e) + c); }

    Jet operator-() const {
        Jet r = shape();
        r.valid_ = valid_;
        for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
        return r;
    }

    Jet operator+(const Jet& o) const {
        check_compatible(o);
        Jet r = *this;
        r.valid_ = std::min(valid_, o.valid_);
        for (const auto& [e, c] : o.t_) r.add_coeff(e, c);
        return r;
    }

    Jet operator-(const Jet& o) const {
        check_compatible(o);
        Jet r = *this;
        r.valid_ = std::min(valid_, o.valid_);
        for (const auto& [e, c] : o.t_) r.add_coeff(e, -c);
        return r;
    }

    Jet operator*(const Jet& o) const {
        check_compatible(o);
        Jet r = shape();
        r.valid_ = std::min(valid_, o.valid_);
        Exps e(static_cast<size_t>(nvars_));
        for (const auto& [ea, ca] : t_) {
            int da = total_degree(ea);
            for (const auto& [eb, cb] : o.t_) {
                if (da + total_degree(eb) > order_) continue;
                for (int i = 0; i < nvars_; ++i)
                    e[static_cast<size_t>(i)] =
                        ea[static_cast<size_t>(i)] + eb[static_cast<size_t>(i)];
                r.add_coeff(e, ca * cb);
            }
        }
        return r;
    }

    Jet& operator+=(const Jet& o) { return *this = *this + o; }
    Jet& operator-=(const Jet& o) { return *this = *this - o; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    Jet scale(const Complex& s) const {
        Jet r = shape();
        r.valid_ = valid_;
        for (const auto& [e, c] : t_) r.set_coeff(e, c * s);
        return r;
    }

    Jet pow(unsigned n) const {
        Jet acc = constant(nvars_, order_, Complex::of(1.0, 0.0, prec_), prec_, hard_zero_);
        acc.valid_ = valid_;
        Jet base = *this;
        while (n) {
            if (n & 1) acc *= base;
            if (n >>= 1) base *= base;
        }
        return acc;
    }

    /// Keeps terms of total degree <= k. A truncation at or below the
    /// valid order defines a new exact polynomial, hence is fully valid.
    Jet truncate(int k) const {
        Jet r = shape();
        for (const auto& [e, c] : t_)
            if (total_degree(e) <= k) r.t_.emplace(e, c);
        r.valid_ = (k <= valid_) ? order_ : valid_;
        return r;
    }

    Jet derivative(int var) const {
        if (var < 0 || var >= nvars_) throw PreconditionError("Jet: variable out of range");
        Jet r = shape();
        for (const auto& [e, c] : t_) {
            if (!e[static_cast<size_t>(var)]) continue;
            Exps e2 = e;
            --e2[static_cast<size_t>(var)];
            r.add_coeff(e2, Real::of_long(e[static_cast<size_t>(var)], prec_) * c);
        }
        r.valid_ = std::max(0, valid_ - 1);
        return r;
    }

    /// Substitutes images[i] for variable i; all images share a ring and
    /// the truncation order of this jet.
    Jet compose(const std::vector<Jet>& images) const {
        if (static_cast<int>(images.size()) != nvars_)
            throw PreconditionError("Jet: substitution arity mismatch");
        int m = images.empty() ? 0 : images[0].nvars();
        int v = valid_;
        for (const auto& g : images) {
            if (g.nvars() != m || g.order() != order_)
                throw PreconditionError("Jet: substitution ring mismatch");
            v = std::min(v, g.valid_);
        }
        std::vector<std::vector<Jet>> powers(static_cast<size_t>(nvars_));
        Jet acc(m, order_, prec_, hard_zero_);
        for (const auto& [e, c] : t_) {
            Jet term = constant(m, order_, c, prec_, hard_zero_);
            for (int i = 0; i < nvars_ && !term.stored_zero(); ++i) {
                int ei = e[static_cast<size_t>(i)];
                if (!ei) continue;
                auto& cache = powers[static_cast<size_t>(i)];
                if (cache.empty())
                    cache.push_back(
                        constant(m, order_, Complex::of(1.0, 0.0, prec_), prec_, hard_zero_));
                while (static_cast<int>(cache.size()) <= ei)
                    cache.push_back(cache.back() * images[static_cast<size_t>(i)]);
                term *= cache[static_cast<size_t>(ei)];
            }
            acc += term;
        }
        acc.valid_ = v;
        return acc;
    }

    Complex eval(const std::vector<Complex>& x) const {
        if (static_cast<int>(x.size()) != nvars_)
            throw PreconditionError("Jet: evaluation arity mismatch");
        std::vector<std::vector<Complex>> powers(static_cast<size_t>(nvars_));
        Complex acc(prec_);
        for (const auto& [e, c] : t_) {
            Complex term = c;
            for (int i = 0; i < nvars_; ++i) {
                int ei = e[static_cast<size_t>(i)];
                if (!ei) continue;
                auto& cache = powers[static_cast<size_t>(i)];
                if (cache.empty()) cache.push_back(Complex::of(1.0, 0.0, prec_));
                while (static_cast<int>(cache.size()) <= ei)
                    cache.push_back(cache.back() * x[static_cast<size_t>(i)]);
                term *= cache[static_cast<size_t>(ei)];
            }
            acc += term;
        }
        return acc;
    }

    /// Multiplicative inverse; the constant term must exceed the hard-zero
    /// threshold in modulus.
    Jet invert_unit() const {
        Complex c0 = constant_term();
        if (negligible(c0)) throw PreconditionError("Jet: not a unit");
        Jet v = constant(nvars_, order_, c0.inv(), prec_, hard_zero_);
        Jet two = constant(nvars_, order_, Complex::of(2.0, 0.0, prec_), prec_, hard_zero_);
        int correct = 0;
        while (correct < order_) {
            v = v * (two - *this * v);
            correct = 2 * correct + 1;
        }
        v.valid_ = valid_;
        return v;
    }

    /// Moves variable i to slot where[i] of a wider ring.
    Jet map_vars(int new_nvars, const std::vector<int>& where) const {
        if (static_cast<int>(where.size()) != nvars_)
            throw PreconditionError("Jet: variable map arity mismatch");
        Jet r(new_nvars, order_, prec_, hard_zero_);
        for (const auto& [e, c] : t_) {
            Exps e2(static_cast<size_t>(new_nvars), 0);
            for (int i = 0; i < nvars_; ++i) {
                if (!e[static_cast<size_t>(i)]) continue;
                int w = where[static_cast<size_t>(i)];
                if (w < 0 || w >= new_nvars)
                    throw PreconditionError("Jet: variable map out of range");
                e2[static_cast<size_t>(w)] += e[static_cast<size_t>(i)];
            }
            r.add_coeff(e2, c);
        }
        r.valid_ = valid_;
        return r;
    }

    /// Restriction to the axis of one variable: all other variables set to
    /// zero.
    Jet restrict_to_axis(int var) const {
        Jet r = shape();
        r.valid_ = valid_;
        for (const auto& [e, c] : t_) {
            bool pure = true;
            for (int i = 0; i < nvars_ && pure; ++i)
                if (i != var && e[static_cast<size_t>(i)]) pure = false;
            if (pure) r.t_.emplace(e, c);
        }
        return r;
    }

    /// Largest coefficient modulus among terms of total degree <= upto.
    Real max_abs_coeff(int upto) const {
        Real m(prec_);
        for (const auto& [e, c] : t_) {
            if (total_degree(e) > upto) continue;
            Real a = c.abs();
            if (a > m) m = a;
        }
        return m;
    }

    /// Weighted norm sum |c_e| * radius^deg(e) over all stored terms.
    Real weighted_norm(double radius) const {
        Real acc(prec_);
        Real r = Real::of(radius, prec_);
        for (const auto& [e, c] : t_) {
            Real w = c.abs();
            for (int k = 0; k < total_degree(e); ++k) w *= r;
            acc += w;
        }
        return acc;
    }

    /// Exact dyadic rationalization of the stored coefficients.
    MultiPoly to_poly_dyadic() const {
        MultiPoly p(nvars_);
        for (const auto& [e, c] : t_) p.add_term(e, c.to_dyadic_rat());
        return p;
    }

    /// Largest coefficient modulus of (a - b) up to total degree `upto`.
    static Real max_abs_diff(const Jet& a, const Jet& b, int upto) {
        return (a - b).max_abs_coeff(upto);
    }

private:
    Jet shape() const { return Jet(nvars_, order_, prec_, hard_zero_); }

    bool negligible(const Complex& c) const {
        return c.re().abs().cmp(hard_zero_) <= 0 && c.im().abs().cmp(hard_zero_) <= 0;
    }

    void check_compatible(const Jet& o) const {
        if (nvars_ != o.nvars_ || order_ != o.order_)
            throw PreconditionError("Jet: shape mismatch");
    }

    int nvars_;
    int order_;
    int valid_;
    mpfr_prec_t prec_;
    double hard_zero_;
    TermMap t_;
};

/// Polynomial in one distinguished variable of the parent jet ring whose
/// coefficients are jets in the remaining variables; stored highest
/// degree first.
struct JetPoly {
    int var = 0;
    int parent_nvars = 0;
    std::vector<Jet> coeffs;

    JetPoly() = default;
    JetPoly(int var_, int parent_nvars_) : var(var_), parent_nvars(parent_nvars_) {}

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    const Jet& coeff_of(int k) const {
        if (k < 0 || k > degree()) throw PreconditionError("JetPoly: index out of range");
        return coeffs[static_cast<size_t>(degree() - k)];
    }

    bool is_monic(double tol = 1e-9) const {
        if (coeffs.empty()) return false;
        const Jet& lead = coeffs.front();
        Jet rest = lead - Jet::constant(lead.nvars(), lead.order(),
                                        Complex::of(1.0, 0.0, lead.prec()), lead.prec(),
                                        lead.hard_zero());
        return rest.max_abs_coeff(lead.order()).cmp(tol) <= 0;
    }

    int min_coeff_valid() const {
        int v = coeffs.empty() ? 0 : coeffs.front().order();
        for (const auto& c : coeffs) v = std::min(v, c.valid());
        return v;
    }

    /// Decomposes f by powers of `var`.
    static JetPoly extract(const Jet& f, int var) {
        JetPoly r(var, f.nvars());
        int d = 0;
        for (const auto& [e, c] : f.terms()) d = std::max(d, e[static_cast<size_t>(var)]);
        std::vector<int> where;
        for (int i = 0; i < f.nvars(); ++i)
            if (i != var) where.push_back(i < var ? i : i - 1);
        r.coeffs.assign(static_cast<size_t>(d) + 1,
                        Jet(f.nvars() - 1, f.order(), f.prec(), f.hard_zero()));
        for (auto& c : r.coeffs) c.set_valid(f.valid());
        for (const auto& [e, c] : f.terms()) {
            int k = e[static_cast<size_t>(var)];
            Exps e2;
            e2.reserve(e.size() - 1);
            for (size_t i = 0; i < e.size(); ++i)
                if (static_cast<int>(i) != var) e2.push_back(e[i]);
            r.coeffs[static_cast<size_t>(d - k)].add_coeff(e2, c);
        }
        return r;
    }

    /// Embeds back into the parent ring, truncating at joint degree
    /// `order`.
    Jet to_jet(int order) const {
        Jet acc(parent_nvars, order,
                coeffs.empty() ? 128 : coeffs.front().prec(),
                coeffs.empty() ? 1e-30 : coeffs.front().hard_zero());
        int v = acc.order();
        std::vector<int> where;
        for (int i = 0; i < parent_nvars; ++i)
            if (i != var) where.push_back(i);
        int d = degree();
        for (int k = 0; k <= d; ++k) {
            const Jet& c = coeff_of(k);
            v = std::min(v, c.valid());
            Jet lifted = c.map_vars(parent_nvars, where);
            for (const auto& [e, cc] : lifted.terms()) {
                Exps e2 = e;
                e2[static_cast<size_t>(var)] += k;
                acc.add_coeff(e2, cc);
            }
        }
        acc.set_valid(v);
        return acc;
    }

    JetPoly operator*(const JetPoly& o) const {
        if (var != o.var || parent_nvars != o.parent_nvars)
            throw PreconditionError("JetPoly: ring mismatch");
        if (coeffs.empty() || o.coeffs.empty()) return JetPoly(var, parent_nvars);
        int da = degree(), db = o.degree();
        const Jet& model = coeffs.front();
        JetPoly r(var, parent_nvars);
        r.coeffs.assign(static_cast<size_t>(da + db) + 1,
                        Jet(model.nvars(), model.order(), model.prec(), model.hard_zero()));
        for (int i = 0; i <= da; ++i)
            for (int j = 0; j <= db; ++j) {
                size_t slot = static_cast<size_t>(da + db - (i + j));
                r.coeffs[slot] += coeff_of(i) * o.coeff_of(j);
            }
        return r;
    }

    JetPoly pow(unsigned n) const {
        JetPoly acc(var, parent_nvars);
        const Jet* model = coeffs.empty() ? nullptr : &coeffs.front();
        if (!model) throw PreconditionError("JetPoly: power of empty polynomial");
        acc.coeffs.assign(1, Jet::constant(model->nvars(), model->order(),
                                           Complex::of(1.0, 0.0, model->prec()), model->prec(),
                                           model->hard_zero()));
        JetPoly base = *this;
        while (n) {
            if (n & 1) acc = acc * base;
            if (n >>= 1) base = base * base;
        }
        return acc;
    }
};

/// Polynomial in an abstract variable z with jet coefficients, ascending
/// by power of z. Used for one-variable polynomial conditions on jets.
struct ZPoly {
    std::vector<Jet> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }

    Jet eval(const Jet& z) const {
        if (c.empty()) throw PreconditionError("ZPoly: empty polynomial");
        Jet acc = c.back();
        for (int k = degree() - 1; k >= 0; --k) acc = acc * z + c[static_cast<size_t>(k)];
        return acc;
    }

    ZPoly derivative() const {
        ZPoly r;
        for (int k = 1; k <= degree(); ++k)
            r.c.push_back(c[static_cast<size_t>(k)].scale(
                Complex::of(static_cast<double>(k), 0.0, c[static_cast<size_t>(k)].prec())));
        return r;
    }
};

}  // namespace nash
