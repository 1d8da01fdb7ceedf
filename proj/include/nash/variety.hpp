#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nash/errors.hpp"
#include "nash/groebner.hpp"
#include "nash/multipoly.hpp"
#include "nash/rational.hpp"
#include "nash/resultant.hpp"
#include "nash/rng.hpp"

namespace nash {

/// An affine variety presented by generators over a split ambient space:
/// base variables first, fiber variables after them, with the dimension
/// the caller asserts for it.
struct VarietySpec {
    std::vector<std::string> base_vars;
    std::vector<std::string> fiber_vars;
    std::vector<MultiPoly> generators;
    int declared_dim = 0;

    int base_count() const { return static_cast<int>(base_vars.size()); }
    int fiber_count() const { return static_cast<int>(fiber_vars.size()); }
    int nvars() const { return base_count() + fiber_count(); }

    std::vector<std::string> all_names() const {
        std::vector<std::string> names = base_vars;
        names.insert(names.end(), fiber_vars.begin(), fiber_vars.end());
        return names;
    }

    void validate() const {
        std::set<std::string> seen;
        for (const std::string& name : all_names()) {
            if (name.empty()) throw InputError("variety: empty variable name");
            if (name == "i") throw InputError("variety: 'i' is reserved for the imaginary unit");
            if (!seen.insert(name).second)
                throw InputError("variety: duplicate variable name '" + name + "'");
        }
        for (const MultiPoly& g : generators) {
            if (g.nvars() != nvars()) throw InputError("variety: generator ring mismatch");
            if (g.is_zero()) throw InputError("variety: zero generator");
        }
        if (declared_dim < 0 || declared_dim > nvars())
            throw InputError("variety: declared dimension out of range");
    }
};

struct PropernessResult {
    bool certified = false;
    std::vector<MultiPoly> witnesses;  // one per fiber variable when certified
    int failing_fiber = -1;            // index of the first fiber variable without a witness
};

/// Noether-position certificate for the projection onto the base
/// variables: for each fiber variable an integral relation, monic in it
/// and free of the later fiber variables.
inline PropernessResult properness_check(const VarietySpec& V) {
    V.validate();
    int m = V.base_count(), s = V.fiber_count();
    PropernessResult res;
    if (s == 0) {
        res.certified = true;
        return res;
    }
    if (V.generators.empty()) {
        res.failing_fiber = 0;  // the whole space never projects properly
        return res;
    }
    IdealBasis basis = groebner_basis(V.generators, MonomialOrder::fiber_tower(m, s));
    if (basis.gens.size() == 1 && basis.gens.front().degree() == 0) {
        res.certified = true;  // empty variety
        return res;
    }
    for (int j = 0; j < s; ++j) {
        const MultiPoly* witness = nullptr;
        for (const MultiPoly& g : basis.gens) {
            Exps lt = leading_exps(g, basis.order);
            bool pure = lt[static_cast<size_t>(m + j)] > 0;
            for (int v = 0; v < V.nvars() && pure; ++v)
                if (v != m + j && lt[static_cast<size_t>(v)] > 0) pure = false;
            if (pure) {
                witness = &g;
                break;
            }
        }
        if (!witness) {
            res.failing_fiber = j;
            return res;
        }
        res.witnesses.push_back(*witness);
    }
    res.certified = true;
    return res;
}

namespace detail {

/// The defining polynomial of a hypersurface from generators of its
/// ideal, presented in one variable over the rest: gcd of all the
/// generators, normalized monic, squarefree. `start` must be monic.
inline UniOverPoly hypersurface_eliminant(UniOverPoly start,
                                          const std::vector<UniOverPoly>& rest) {
    for (const UniOverPoly& f : rest) {
        if (f.is_zero()) continue;
        UniOverPoly g = subresultant_gcd(start, f);
        if (g.degree() < 1)
            throw InternalError("hypersurface_eliminant: generators share no positive-degree factor");
        // The true common factor is monic up to content, so the leading
        // coefficient divides every other one exactly.
        MultiPoly lc = g.lc();
        if (lc.degree() == 0) {
            g.monicize();
        } else {
            for (MultiPoly& c : g.coeffs) c = exact_divide(c, lc);
        }
        start = std::move(g);
    }
    return squarefree_part(start);
}

}  // namespace detail

/// The monic squarefree polynomial in z cutting out the image of the
/// variety under (y, v) -> (y, L(v)); L gives rational coefficients on
/// the fiber variables. Returned in the ring (base variables..., z) with
/// z in the last slot.
inline UniOverPoly optimal_polynomial(const VarietySpec& V, const std::vector<GaussRat>& L) {
    V.validate();
    int m = V.base_count(), s = V.fiber_count();
    if (static_cast<int>(L.size()) != s)
        throw InputError("optimal_polynomial: linear form arity mismatch");
    PropernessResult proper = properness_check(V);
    if (!proper.certified)
        throw PreconditionError("optimal_polynomial: projection to the base is not proper (fiber variable '" +
                                V.fiber_vars[static_cast<size_t>(proper.failing_fiber)] + "' escapes)");

    // Extended ring (y, v, z); eliminate the fiber block with z kept
    // above the base so a monic-in-z eliminant surfaces.
    int n = m + s + 1;
    int zvar = m + s;
    std::vector<MultiPoly> gens;
    for (const MultiPoly& g : V.generators) {
        std::vector<int> where(static_cast<size_t>(m + s));
        std::iota(where.begin(), where.end(), 0);
        gens.push_back(g.map_vars(n, where));
    }
    MultiPoly form = MultiPoly::variable(n, zvar);
    for (int j = 0; j < s; ++j)
        form -= MultiPoly::constant(n, L[static_cast<size_t>(j)]) * MultiPoly::variable(n, m + j);
    gens.push_back(std::move(form));

    MonomialOrder order;
    order.nvars = n;
    std::vector<int> drop;
    if (s > 0) {
        MonomialOrder::Group fiber;
        for (int j = 0; j < s; ++j) {
            fiber.vars.push_back(m + j);
            drop.push_back(m + j);
        }
        order.groups.push_back(std::move(fiber));
    }
    order.groups.push_back(MonomialOrder::Group{{zvar}, false});
    if (m > 0) {
        MonomialOrder::Group base;
        for (int i = 0; i < m; ++i) base.vars.push_back(i);
        order.groups.push_back(std::move(base));
    }
    order.check();

    IdealBasis elim = eliminate(groebner_basis(gens, order), drop);
    std::vector<UniOverPoly> in_z;
    const UniOverPoly* start = nullptr;
    for (const MultiPoly& g : elim.gens) {
        UniOverPoly u = UniOverPoly::from_multipoly(g, zvar);
        if (u.degree() < 1)
            throw PipelineError("optimal_polynomial: image lies in a proper subvariety of the base");
        in_z.push_back(std::move(u));
    }
    for (const UniOverPoly& u : in_z)
        if (u.is_monic() && (!start || u.degree() < start->degree())) start = &u;
    if (!start) throw PipelineError("optimal_polynomial: no monic eliminant in z");

    std::vector<UniOverPoly> rest;
    for (const UniOverPoly& u : in_z)
        if (&u != start) rest.push_back(u);
    UniOverPoly p = detail::hypersurface_eliminant(*start, rest);

    // Move to the compact ring (y..., z).
    std::vector<int> where(static_cast<size_t>(n), -1);
    for (int i = 0; i < m; ++i) where[static_cast<size_t>(i)] = i;
    where[static_cast<size_t>(zvar)] = m;
    UniOverPoly out;
    out.var = m;
    out.nvars = m + 1;
    for (const MultiPoly& c : p.coeffs) out.coeffs.push_back(c.map_vars(m + 1, where));
    if (discriminant(out).is_zero())
        throw InternalError("optimal_polynomial: squarefree eliminant has zero discriminant");
    return out;
}

/// Number of distinct fiber points over a random base point off the
/// discriminant locus. Exact: specializes the ideal, saturates it with
/// the squarefree specialized eliminants, and counts standard monomials.
inline int generic_fiber_count(const VarietySpec& V, std::uint64_t seed, long bound = 997,
                               int max_tries = 32) {
    V.validate();
    int m = V.base_count(), s = V.fiber_count();
    PropernessResult proper = properness_check(V);
    if (!proper.certified)
        throw PreconditionError("generic_fiber_count: projection to the base is not proper");
    if (s == 0) return V.generators.empty() ? 1 : 0;
    if (V.generators.empty())
        throw PreconditionError("generic_fiber_count: fibers of the full space are not finite");

    // Per-variable symbolic eliminants E_j(y, v_j), squarefree and monic.
    std::vector<UniOverPoly> eliminants;
    std::vector<MultiPoly> discs;
    for (int j = 0; j < s; ++j) {
        MonomialOrder order;
        order.nvars = m + s;
        std::vector<int> drop;
        MonomialOrder::Group others;
        for (int t = 0; t < s; ++t)
            if (t != j) {
                others.vars.push_back(m + t);
                drop.push_back(m + t);
            }
        if (!others.vars.empty()) order.groups.push_back(std::move(others));
        order.groups.push_back(MonomialOrder::Group{{m + j}, false});
        if (m > 0) {
            MonomialOrder::Group base;
            for (int i = 0; i < m; ++i) base.vars.push_back(i);
            order.groups.push_back(std::move(base));
        }
        order.check();
        IdealBasis elim = eliminate(groebner_basis(V.generators, order), drop);
        std::vector<UniOverPoly> in_v;
        for (const MultiPoly& g : elim.gens) {
            UniOverPoly u = UniOverPoly::from_multipoly(g, m + j);
            if (u.degree() >= 1) in_v.push_back(std::move(u));
        }
        const UniOverPoly* start = nullptr;
        for (const UniOverPoly& u : in_v)
            if (u.is_monic() && (!start || u.degree() < start->degree())) start = &u;
        if (!start)
            throw PipelineError("generic_fiber_count: no monic eliminant for fiber variable " +
                                V.fiber_vars[static_cast<size_t>(j)]);
        std::vector<UniOverPoly> rest;
        for (const UniOverPoly& u : in_v)
            if (&u != start) rest.push_back(u);
        UniOverPoly ej = detail::hypersurface_eliminant(*start, rest);
        discs.push_back(discriminant(ej));
        eliminants.push_back(std::move(ej));
    }

    Rng rng(seed);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<GaussRat> point(static_cast<size_t>(m + s), GaussRat(0));
        for (int i = 0; i < m; ++i)
            point[static_cast<size_t>(i)] = GaussRat(rng.int_in(-bound, bound));
        bool degenerate = false;
        for (const MultiPoly& d : discs)
            if (d.eval(point).is_zero()) {
                degenerate = true;
                break;
            }
        if (degenerate) continue;

        // Specialize everything to the chosen base point.
        std::vector<MultiPoly> images;
        for (int i = 0; i < m; ++i)
            images.push_back(MultiPoly::constant(s, point[static_cast<size_t>(i)]));
        for (int j = 0; j < s; ++j) images.push_back(MultiPoly::variable(s, j));
        std::vector<MultiPoly> fiber_gens;
        for (const MultiPoly& g : V.generators) fiber_gens.push_back(g.compose(images));
        for (const UniOverPoly& ej : eliminants)
            fiber_gens.push_back(ej.to_multipoly().compose(images));

        IdealBasis gb = groebner_basis(fiber_gens, MonomialOrder::grlex(s));
        return static_cast<int>(standard_monomials(gb).size());
    }
    throw ExhaustionError("generic_fiber_count: no nondegenerate base point within " +
                          std::to_string(max_tries) + " tries");
}

/// Krull dimension of the variety from a graded basis of its ideal.
inline int variety_dimension(const VarietySpec& V) {
    V.validate();
    if (V.generators.empty()) return V.nvars();
    IdealBasis basis = groebner_basis(V.generators, MonomialOrder::grlex(V.nvars()));
    return ideal_dimension(basis, V.nvars());
}

}  // namespace nash
