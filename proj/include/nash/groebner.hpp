#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "nash/errors.hpp"
#include "nash/multipoly.hpp"

namespace nash {

/// Term order assembled from variable groups compared left to right; each
/// group is ordered graded-lexicographically or purely lexicographically
/// over its listed variables. The groups must partition the ring.
struct MonomialOrder {
    struct Group {
        std::vector<int> vars;
        bool lex = false;
    };

    int nvars = 0;
    std::vector<Group> groups;

    static MonomialOrder grlex(int nvars) {
        MonomialOrder o;
        o.nvars = nvars;
        Group g;
        g.vars.resize(static_cast<size_t>(nvars));
        std::iota(g.vars.begin(), g.vars.end(), 0);
        o.groups.push_back(std::move(g));
        return o;
    }

    /// Pure lexicographic order; `priority` lists every variable from
    /// strongest to weakest.
    static MonomialOrder lex(std::vector<int> priority) {
        MonomialOrder o;
        o.nvars = static_cast<int>(priority.size());
        o.groups.push_back(Group{std::move(priority), true});
        o.check();
        return o;
    }

    /// Two graded blocks: the dropped variables dominate the rest.
    static MonomialOrder elim_block(int nvars, const std::vector<int>& drop) {
        MonomialOrder o;
        o.nvars = nvars;
        std::vector<char> dropped(static_cast<size_t>(nvars), 0);
        for (int v : drop) {
            if (v < 0 || v >= nvars) throw PreconditionError("elim_block: variable out of range");
            dropped[static_cast<size_t>(v)] = 1;
        }
        Group hi, lo;
        for (int v = 0; v < nvars; ++v)
            (dropped[static_cast<size_t>(v)] ? hi : lo).vars.push_back(v);
        if (!hi.vars.empty()) o.groups.push_back(std::move(hi));
        if (!lo.vars.empty()) o.groups.push_back(std::move(lo));
        o.check();
        return o;
    }

    /// Fiber variables first, lexicographically with the highest index
    /// strongest, then the base block graded. One basis in this order
    /// witnesses elimination of every upper tail of fiber variables.
    static MonomialOrder fiber_tower(int base, int fiber) {
        MonomialOrder o;
        o.nvars = base + fiber;
        if (fiber > 0) {
            Group g;
            g.lex = true;
            for (int v = base + fiber - 1; v >= base; --v) g.vars.push_back(v);
            o.groups.push_back(std::move(g));
        }
        if (base > 0) {
            Group g;
            for (int v = 0; v < base; ++v) g.vars.push_back(v);
            o.groups.push_back(std::move(g));
        }
        o.check();
        return o;
    }

    /// Strict comparison: true when a is smaller than b.
    bool less(const Exps& a, const Exps& b) const {
        for (const Group& g : groups) {
            if (!g.lex) {
                long da = 0, db = 0;
                for (int v : g.vars) {
                    da += a[static_cast<size_t>(v)];
                    db += b[static_cast<size_t>(v)];
                }
                if (da != db) return da < db;
            }
            for (int v : g.vars) {
                int av = a[static_cast<size_t>(v)], bv = b[static_cast<size_t>(v)];
                if (av != bv) return av < bv;
            }
        }
        return false;
    }

    void check() const {
        std::vector<char> seen(static_cast<size_t>(nvars), 0);
        int count = 0;
        for (const Group& g : groups)
            for (int v : g.vars) {
                if (v < 0 || v >= nvars || seen[static_cast<size_t>(v)])
                    throw PreconditionError("MonomialOrder: groups must partition the variables");
                seen[static_cast<size_t>(v)] = 1;
                ++count;
            }
        if (count != nvars)
            throw PreconditionError("MonomialOrder: groups must partition the variables");
    }

    /// True when a prefix of the groups covers exactly the given set.
    bool eliminates(const std::vector<int>& drop) const {
        std::set<int> want(drop.begin(), drop.end());
        std::set<int> have;
        if (want.empty()) return true;
        for (const Group& g : groups) {
            for (int v : g.vars) have.insert(v);
            if (have == want) return true;
            if (have.size() >= want.size()) break;
        }
        return false;
    }
};

/// A generating set tagged with the order it was computed in. When
/// `reduced` is set the generators form the unique reduced Groebner
/// basis: monic, with no term divisible by another leading term.
struct IdealBasis {
    std::vector<MultiPoly> gens;
    MonomialOrder order;
    bool reduced = false;
};

namespace detail {

/// Dense term list sorted descending in the active order, with a sugar
/// degree for the selection strategy.
struct GbPoly {
    std::vector<std::pair<Exps, GaussRat>> t;
    int sugar = 0;

    bool zero() const { return t.empty(); }
    const Exps& lt() const { return t.front().first; }
    const GaussRat& lc() const { return t.front().second; }
};

inline GbPoly gb_from(const MultiPoly& p, const MonomialOrder& ord) {
    GbPoly g;
    g.t.assign(p.terms().begin(), p.terms().end());
    std::sort(g.t.begin(), g.t.end(),
              [&](const auto& a, const auto& b) { return ord.less(b.first, a.first); });
    g.sugar = p.degree();
    return g;
}

inline MultiPoly gb_to(const GbPoly& g, int nvars) {
    MultiPoly p(nvars);
    for (const auto& [e, c] : g.t) p.add_term(e, c);
    return p;
}

inline bool exps_divides(const Exps& a, const Exps& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exps exps_lcm(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

inline Exps exps_sub(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

/// g scaled by c*x^e; multiplying by a single term preserves sortedness.
inline GbPoly gb_mul_term(const GbPoly& g, const Exps& e, const GaussRat& c) {
    GbPoly r;
    r.t.reserve(g.t.size());
    for (const auto& [ge, gc] : g.t) {
        Exps ne(ge);
        for (size_t i = 0; i < ne.size(); ++i) ne[i] += e[i];
        r.t.emplace_back(std::move(ne), gc * c);
    }
    r.sugar = g.sugar + total_degree(e);
    return r;
}

inline GbPoly gb_sub(const GbPoly& a, const GbPoly& b, const MonomialOrder& ord) {
    GbPoly r;
    r.t.reserve(a.t.size() + b.t.size());
    size_t i = 0, j = 0;
    while (i < a.t.size() || j < b.t.size()) {
        if (j == b.t.size() || (i < a.t.size() && ord.less(b.t[j].first, a.t[i].first))) {
            r.t.push_back(a.t[i++]);
        } else if (i == a.t.size() || ord.less(a.t[i].first, b.t[j].first)) {
            r.t.emplace_back(b.t[j].first, -b.t[j].second);
            ++j;
        } else {
            GaussRat c = a.t[i].second - b.t[j].second;
            if (!c.is_zero()) r.t.emplace_back(a.t[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    r.sugar = std::max(a.sugar, b.sugar);
    return r;
}

/// Full normal form of f against G: every term of the result is reduced.
inline GbPoly gb_normal_form(GbPoly f, const std::vector<GbPoly>& G, const MonomialOrder& ord) {
    GbPoly rem;
    rem.sugar = f.sugar;
    while (!f.zero()) {
        bool reduced_step = false;
        for (const GbPoly& g : G) {
            if (g.zero() || !exps_divides(g.lt(), f.lt())) continue;
            Exps shift = exps_sub(f.lt(), g.lt());
            GaussRat coef = f.lc() / g.lc();
            GbPoly scaled = gb_mul_term(g, shift, coef);
            int sug = std::max(f.sugar, scaled.sugar);
            f = gb_sub(f, scaled, ord);
            f.sugar = sug;
            reduced_step = true;
            break;
        }
        if (!reduced_step) {
            rem.t.push_back(f.t.front());
            f.t.erase(f.t.begin());
        }
        rem.sugar = std::max(rem.sugar, f.sugar);
    }
    return rem;
}

inline void gb_monicize(GbPoly& g) {
    if (g.zero()) return;
    GaussRat inv = g.lc().inv();
    for (auto& [e, c] : g.t) c = c * inv;
}

}  // namespace detail

/// Reduced Groebner basis by Buchberger's algorithm with the sugar
/// selection strategy and the product and chain criteria.
inline IdealBasis groebner_basis(const std::vector<MultiPoly>& gens, const MonomialOrder& order) {
    if (gens.empty()) throw PreconditionError("groebner_basis: empty generator list");
    int nvars = gens.front().nvars();
    order.check();
    if (order.nvars != nvars) throw PreconditionError("groebner_basis: order/ring mismatch");

    std::vector<detail::GbPoly> G;
    for (const MultiPoly& p : gens) {
        if (p.nvars() != nvars) throw PreconditionError("groebner_basis: mixed rings");
        if (p.is_zero()) continue;
        detail::GbPoly g = detail::gb_from(p, order);
        detail::gb_monicize(g);
        G.push_back(std::move(g));
    }
    IdealBasis out;
    out.order = order;
    out.reduced = true;
    if (G.empty()) return out;  // the zero ideal

    struct PairKey {
        int sugar, lcmdeg, i, j;
        bool operator<(const PairKey& o) const {
            return std::tie(sugar, lcmdeg, i, j) < std::tie(o.sugar, o.lcmdeg, o.i, o.j);
        }
    };
    std::set<PairKey> queue;
    std::set<std::pair<int, int>> pending;

    auto pair_sugar = [&](int i, int j, const Exps& lcm) {
        int si = G[static_cast<size_t>(i)].sugar +
                 total_degree(detail::exps_sub(lcm, G[static_cast<size_t>(i)].lt()));
        int sj = G[static_cast<size_t>(j)].sugar +
                 total_degree(detail::exps_sub(lcm, G[static_cast<size_t>(j)].lt()));
        return std::max(si, sj);
    };
    auto add_pairs = [&](int j) {
        for (int i = 0; i < j; ++i) {
            Exps lcm = detail::exps_lcm(G[static_cast<size_t>(i)].lt(), G[static_cast<size_t>(j)].lt());
            // Product criterion: coprime leading terms reduce to zero.
            if (total_degree(lcm) ==
                total_degree(G[static_cast<size_t>(i)].lt()) + total_degree(G[static_cast<size_t>(j)].lt()))
                continue;
            queue.insert(PairKey{pair_sugar(i, j, lcm), total_degree(lcm), i, j});
            pending.emplace(i, j);
        }
    };
    for (int j = 1; j < static_cast<int>(G.size()); ++j) add_pairs(j);

    long budget = 200000;
    while (!queue.empty()) {
        if (--budget < 0) throw InternalError("groebner_basis: pair budget exhausted");
        PairKey k = *queue.begin();
        queue.erase(queue.begin());
        pending.erase({k.i, k.j});
        const detail::GbPoly& gi = G[static_cast<size_t>(k.i)];
        const detail::GbPoly& gj = G[static_cast<size_t>(k.j)];
        Exps lcm = detail::exps_lcm(gi.lt(), gj.lt());

        // Chain criterion: skip when a third leading term divides the lcm
        // and both side pairs were already handled.
        bool skip = false;
        for (int t = 0; t < static_cast<int>(G.size()) && !skip; ++t) {
            if (t == k.i || t == k.j) continue;
            if (!detail::exps_divides(G[static_cast<size_t>(t)].lt(), lcm)) continue;
            auto p1 = std::minmax(k.i, t);
            auto p2 = std::minmax(k.j, t);
            if (!pending.count({p1.first, p1.second}) && !pending.count({p2.first, p2.second}))
                skip = true;
        }
        if (skip) continue;

        detail::GbPoly a = detail::gb_mul_term(gi, detail::exps_sub(lcm, gi.lt()), gi.lc().inv());
        detail::GbPoly b = detail::gb_mul_term(gj, detail::exps_sub(lcm, gj.lt()), gj.lc().inv());
        detail::GbPoly s = detail::gb_sub(a, b, order);
        s.sugar = pair_sugar(k.i, k.j, lcm);
        detail::GbPoly r = detail::gb_normal_form(std::move(s), G, order);
        if (r.zero()) continue;
        detail::gb_monicize(r);
        if (total_degree(r.lt()) == 0) {
            // The ideal is the whole ring.
            out.gens = {MultiPoly::constant(nvars, GaussRat(1))};
            return out;
        }
        G.push_back(std::move(r));
        add_pairs(static_cast<int>(G.size()) - 1);
    }

    // Minimalize: drop generators whose leading term another one divides.
    std::vector<char> keep(G.size(), 1);
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = 0; j < G.size() && keep[i]; ++j) {
            if (i == j || !keep[j]) continue;
            if (detail::exps_divides(G[j].lt(), G[i].lt()) &&
                !(G[i].lt() == G[j].lt() && i < j))
                keep[i] = 0;
        }
    std::vector<detail::GbPoly> minimal;
    for (size_t i = 0; i < G.size(); ++i)
        if (keep[i]) minimal.push_back(std::move(G[i]));

    // Tail-reduce each generator against the others.
    std::vector<detail::GbPoly> final_basis;
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<detail::GbPoly> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        detail::GbPoly r = detail::gb_normal_form(minimal[i], others, order);
        detail::gb_monicize(r);
        if (!r.zero()) final_basis.push_back(std::move(r));
    }
    std::sort(final_basis.begin(), final_basis.end(),
              [&](const detail::GbPoly& x, const detail::GbPoly& y) {
                  return order.less(x.lt(), y.lt());
              });
    for (const detail::GbPoly& g : final_basis) out.gens.push_back(detail::gb_to(g, nvars));
    return out;
}

/// Normal form of f against a reduced basis; zero exactly on membership.
inline MultiPoly reduce_mod(const IdealBasis& basis, const MultiPoly& f) {
    if (f.is_zero() || basis.gens.empty()) return f;
    std::vector<detail::GbPoly> G;
    G.reserve(basis.gens.size());
    for (const MultiPoly& p : basis.gens) G.push_back(detail::gb_from(p, basis.order));
    return detail::gb_to(detail::gb_normal_form(detail::gb_from(f, basis.order), G, basis.order),
                         f.nvars());
}

/// Generators of the elimination ideal: members free of the dropped
/// variables. The basis must have been computed in a block order whose
/// leading block is exactly the dropped set.
inline IdealBasis eliminate(const IdealBasis& basis, const std::vector<int>& drop) {
    if (!basis.order.eliminates(drop))
        throw PreconditionError("eliminate: basis order does not eliminate the requested variables");
    IdealBasis out;
    out.order = basis.order;
    out.reduced = basis.reduced;
    for (const MultiPoly& g : basis.gens) {
        std::vector<bool> used = g.used_vars();
        bool free = true;
        for (int v : drop)
            if (used[static_cast<size_t>(v)]) {
                free = false;
                break;
            }
        if (free) out.gens.push_back(g);
    }
    return out;
}

inline Exps leading_exps(const MultiPoly& p, const MonomialOrder& ord) {
    if (p.is_zero()) throw PreconditionError("leading_exps: zero polynomial");
    const Exps* best = nullptr;
    for (const auto& [e, c] : p.terms())
        if (!best || ord.less(*best, e)) best = &e;
    return *best;
}

/// All monomials outside the leading-term ideal. Requires a basis of a
/// zero-dimensional ideal: every variable must carry a pure-power
/// leading term.
inline std::vector<Exps> standard_monomials(const IdealBasis& basis) {
    if (basis.gens.empty()) throw PreconditionError("standard_monomials: zero ideal is not finite");
    int nvars = basis.gens.front().nvars();
    std::vector<Exps> lts;
    for (const MultiPoly& g : basis.gens) lts.push_back(leading_exps(g, basis.order));

    std::vector<int> cap(static_cast<size_t>(nvars), -1);
    for (const Exps& e : lts) {
        int var = -1, count = 0;
        for (int v = 0; v < nvars; ++v)
            if (e[static_cast<size_t>(v)] > 0) {
                var = v;
                ++count;
            }
        if (count == 0) return {};  // unit ideal
        if (count == 1) {
            int& c = cap[static_cast<size_t>(var)];
            int p = e[static_cast<size_t>(var)];
            if (c < 0 || p < c) c = p;
        }
    }
    for (int v = 0; v < nvars; ++v)
        if (cap[static_cast<size_t>(v)] < 0)
            throw PreconditionError("standard_monomials: ideal is not zero-dimensional");

    std::vector<Exps> out;
    Exps cur(static_cast<size_t>(nvars), 0);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == nvars) {
            for (const Exps& e : lts)
                if (detail::exps_divides(e, cur)) return;
            out.push_back(cur);
            return;
        }
        for (int k = 0; k < cap[static_cast<size_t>(pos)]; ++k) {
            cur[static_cast<size_t>(pos)] = k;
            self(self, pos + 1);
        }
        cur[static_cast<size_t>(pos)] = 0;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

/// Krull dimension of the quotient ring from the leading-term ideal: the
/// largest set of variables no leading term lives entirely inside.
inline int ideal_dimension(const IdealBasis& basis, int nvars) {
    if (basis.gens.empty()) return nvars;
    if (nvars > 24) throw InternalError("ideal_dimension: too many variables for subset scan");
    std::vector<unsigned> masks;
    for (const MultiPoly& g : basis.gens) {
        Exps e = leading_exps(g, basis.order);
        unsigned m = 0;
        for (int v = 0; v < nvars; ++v)
            if (e[static_cast<size_t>(v)] > 0) m |= 1u << v;
        if (m == 0) return -1;  // unit ideal
        masks.push_back(m);
    }
    for (int k = nvars; k >= 0; --k) {
        // Enumerate subsets of size k and look for an independent one.
        std::vector<int> idx(static_cast<size_t>(k));
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            unsigned s = 0;
            for (int v : idx) s |= 1u << v;
            bool independent = true;
            for (unsigned m : masks)
                if ((m & ~s) == 0) {
                    independent = false;
                    break;
                }
            if (independent) return k;
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<size_t>(pos)] == nvars - k + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<size_t>(pos)];
            for (int t = pos + 1; t < k; ++t)
                idx[static_cast<size_t>(t)] = idx[static_cast<size_t>(t - 1)] + 1;
        }
    }
    return -1;
}

}  // namespace nash
