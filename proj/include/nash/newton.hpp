#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "nash/errors.hpp"
#include "nash/jet.hpp"
#include "nash/multipoly.hpp"

namespace nash {

/// Polynomial in a tuple of unknowns whose coefficients are jets in the
/// source variables. Exponent vectors index the unknowns.
struct PolyOverJets {
    int nunknowns = 0;
    std::map<Exps, Jet, GrlexLess> terms;

    void add(const Exps& e, const Jet& c) {
        if (static_cast<int>(e.size()) != nunknowns)
            throw PreconditionError("PolyOverJets: exponent arity mismatch");
        auto it = terms.find(e);
        if (it == terms.end())
            terms.emplace(e, c);
        else
            it->second += c;
    }

    /// Splits an exact polynomial: ring variables with unknown_slot[v] >= 0
    /// become unknowns, the others are evaluated at base_images.at(v).
    static PolyOverJets split(const MultiPoly& f, const std::vector<int>& unknown_slot,
                              int nunknowns, const std::map<int, Jet>& base_images, int order,
                              mpfr_prec_t prec, double hard_zero) {
        if (static_cast<int>(unknown_slot.size()) != f.nvars())
            throw PreconditionError("PolyOverJets: slot map arity mismatch");
        int base_nvars = -1;
        for (const auto& [v, j] : base_images) base_nvars = j.nvars();
        if (base_nvars < 0) base_nvars = 0;
        PolyOverJets out;
        out.nunknowns = nunknowns;
        std::map<int, std::vector<Jet>> powers;
        for (const auto& [e, c] : f.terms()) {
            Exps key(static_cast<size_t>(nunknowns), 0);
            Jet coeff = Jet::constant(base_nvars, order, Complex::of_rat(c, prec), prec,
                                      hard_zero);
            for (int v = 0; v < f.nvars(); ++v) {
                int ev = e[static_cast<size_t>(v)];
                if (!ev) continue;
                if (unknown_slot[static_cast<size_t>(v)] >= 0) {
                    key[static_cast<size_t>(unknown_slot[static_cast<size_t>(v)])] += ev;
                } else {
                    auto it = base_images.find(v);
                    if (it == base_images.end())
                        throw PreconditionError("PolyOverJets: missing base image");
                    auto& cache = powers[v];
                    if (cache.empty())
                        cache.push_back(Jet::constant(base_nvars, order,
                                                      Complex::of(1.0, 0.0, prec), prec,
                                                      hard_zero));
                    while (static_cast<int>(cache.size()) <= ev)
                        cache.push_back(cache.back() * it->second);
                    coeff *= cache[static_cast<size_t>(ev)];
                }
            }
            out.add(key, coeff);
        }
        return out;
    }

    Jet eval(const std::vector<Jet>& u) const {
        if (static_cast<int>(u.size()) != nunknowns)
            throw PreconditionError("PolyOverJets: evaluation arity mismatch");
        if (terms.empty()) throw PreconditionError("PolyOverJets: empty polynomial");
        const Jet& model = terms.begin()->second;
        std::vector<std::vector<Jet>> powers(static_cast<size_t>(nunknowns));
        Jet acc(model.nvars(), model.order(), model.prec(), model.hard_zero());
        for (const auto& [e, c] : terms) {
            Jet term = c;
            for (int i = 0; i < nunknowns; ++i) {
                int ei = e[static_cast<size_t>(i)];
                if (!ei) continue;
                auto& cache = powers[static_cast<size_t>(i)];
                if (cache.empty())
                    cache.push_back(Jet::constant(model.nvars(), model.order(),
                                                  Complex::of(1.0, 0.0, model.prec()),
                                                  model.prec(), model.hard_zero()));
                while (static_cast<int>(cache.size()) <= ei)
                    cache.push_back(cache.back() * u[static_cast<size_t>(i)]);
                term *= cache[static_cast<size_t>(ei)];
            }
            acc += term;
        }
        return acc;
    }

    PolyOverJets partial(int i) const {
        if (i < 0 || i >= nunknowns) throw PreconditionError("PolyOverJets: unknown out of range");
        PolyOverJets r;
        r.nunknowns = nunknowns;
        for (const auto& [e, c] : terms) {
            int ei = e[static_cast<size_t>(i)];
            if (!ei) continue;
            Exps e2 = e;
            --e2[static_cast<size_t>(i)];
            r.add(e2, c.scale(Complex::of(static_cast<double>(ei), 0.0, c.prec())));
        }
        return r;
    }

    int min_coeff_valid() const {
        int v = terms.empty() ? 0 : terms.begin()->second.order();
        for (const auto& [e, c] : terms) v = std::min(v, c.valid());
        return v;
    }
};

struct NewtonConfig {
    double tol = 1e-12;
    int max_iter = 64;
    double pivot_floor = 1e-20;  // smallest usable pivot/Jacobian entry
};

struct NewtonOutcome {
    std::vector<Jet> solution;
    int iterations = 0;
    Real residual;           // max coefficient over the solved square system
    Real residual_extra;     // same over the unselected equations
    std::vector<int> picked; // equation indices of the square subsystem
};

namespace detail {

/// Solves J * delta = rhs by Gauss-Jordan elimination with unit pivots,
/// choosing pivots by largest constant-term modulus.
inline std::vector<Jet> solve_linear_jets(std::vector<std::vector<Jet>> J, std::vector<Jet> rhs,
                                          double pivot_floor) {
    int p = static_cast<int>(rhs.size());
    for (int c = 0; c < p; ++c) {
        int best = -1;
        Real bestval;
        for (int r = c; r < p; ++r) {
            Real v = J[static_cast<size_t>(r)][static_cast<size_t>(c)].constant_term().abs();
            if (best < 0 || v > bestval) {
                best = r;
                bestval = v;
            }
        }
        if (best < 0 || bestval.cmp(pivot_floor) <= 0)
            throw PipelineError("newton_solve: jacobian is not invertible at the base point");
        std::swap(J[static_cast<size_t>(c)], J[static_cast<size_t>(best)]);
        std::swap(rhs[static_cast<size_t>(c)], rhs[static_cast<size_t>(best)]);
        Jet piv = J[static_cast<size_t>(c)][static_cast<size_t>(c)].invert_unit();
        for (int j = 0; j < p; ++j)
            J[static_cast<size_t>(c)][static_cast<size_t>(j)] =
                J[static_cast<size_t>(c)][static_cast<size_t>(j)] * piv;
        rhs[static_cast<size_t>(c)] = rhs[static_cast<size_t>(c)] * piv;
        for (int r = 0; r < p; ++r) {
            if (r == c) continue;
            Jet f = J[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (f.stored_zero()) continue;
            for (int j = 0; j < p; ++j)
                J[static_cast<size_t>(r)][static_cast<size_t>(j)] -=
                    f * J[static_cast<size_t>(c)][static_cast<size_t>(j)];
            rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(c)];
        }
    }
    return rhs;
}

}  // namespace detail

/// Newton iteration for a polynomial system in jet unknowns. With more
/// equations than unknowns a square subsystem is chosen greedily by full
/// pivoting on the numeric Jacobian at the initial point; the remaining
/// equations are evaluated at the end and reported, not solved.
inline NewtonOutcome newton_solve(const std::vector<PolyOverJets>& eqs,
                                  const std::vector<Jet>& initial,
                                  const NewtonConfig& cfg = {}) {
    int p = static_cast<int>(initial.size());
    int q = static_cast<int>(eqs.size());
    if (q < p) throw PreconditionError("newton_solve: underdetermined system");
    for (const auto& e : eqs)
        if (e.nunknowns != p) throw PreconditionError("newton_solve: unknown count mismatch");
    mpfr_prec_t prec = initial.empty() ? 128 : initial[0].prec();

    // Square subsystem selection by greedy full pivoting on the numeric
    // Jacobian at the initial constant terms.
    std::vector<int> picked;
    if (q == p) {
        for (int t = 0; t < p; ++t) picked.push_back(t);
    } else {
        std::vector<std::vector<Complex>> M(static_cast<size_t>(q));
        for (int t = 0; t < q; ++t)
            for (int i = 0; i < p; ++i) {
                PolyOverJets d = eqs[static_cast<size_t>(t)].partial(i);
                Complex v(prec);
                if (!d.terms.empty()) v = d.eval(initial).constant_term();
                M[static_cast<size_t>(t)].push_back(v);
            }
        std::vector<bool> row_used(static_cast<size_t>(q), false);
        std::vector<bool> col_used(static_cast<size_t>(p), false);
        for (int step = 0; step < p; ++step) {
            int br = -1, bc = -1;
            Real bestval;
            for (int r = 0; r < q; ++r) {
                if (row_used[static_cast<size_t>(r)]) continue;
                for (int c = 0; c < p; ++c) {
                    if (col_used[static_cast<size_t>(c)]) continue;
                    Real v = M[static_cast<size_t>(r)][static_cast<size_t>(c)].abs();
                    if (br < 0 || v > bestval) {
                        br = r;
                        bc = c;
                        bestval = v;
                    }
                }
            }
            if (br < 0 || bestval.cmp(cfg.pivot_floor) <= 0)
                throw PipelineError("newton_solve: jacobian is rank-deficient at the base point");
            row_used[static_cast<size_t>(br)] = true;
            col_used[static_cast<size_t>(bc)] = true;
            picked.push_back(br);
            Complex pivinv = M[static_cast<size_t>(br)][static_cast<size_t>(bc)].inv();
            for (int r = 0; r < q; ++r) {
                if (row_used[static_cast<size_t>(r)]) continue;
                Complex f = M[static_cast<size_t>(r)][static_cast<size_t>(bc)] * pivinv;
                for (int c = 0; c < p; ++c)
                    M[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
                        f * M[static_cast<size_t>(br)][static_cast<size_t>(c)];
            }
        }
        std::sort(picked.begin(), picked.end());
    }

    std::vector<Jet> u = initial;
    NewtonOutcome out;
    out.picked = picked;
    Real best_res;
    bool have_best = false;
    int stall = 0;
    for (int it = 0; it <= cfg.max_iter; ++it) {
        std::vector<Jet> R;
        R.reserve(picked.size());
        Real res(prec);
        for (int t : picked) {
            Jet v = eqs[static_cast<size_t>(t)].eval(u);
            Real m = v.max_abs_coeff(v.order());
            if (m > res) res = m;
            R.push_back(-v);
        }
        out.iterations = it;
        out.residual = res;
        if (res.cmp(cfg.tol) <= 0) break;
        if (it == cfg.max_iter)
            throw ContractionError("newton_solve: no convergence within " +
                                   std::to_string(cfg.max_iter) + " iterations");
        if (have_best && !(res < best_res)) {
            if (++stall >= 4)
                throw ContractionError("newton_solve: residual stalled at " +
                                       res.to_decimal_string());
        } else {
            stall = 0;
        }
        if (!have_best || res < best_res) {
            best_res = res;
            have_best = true;
        }
        std::vector<std::vector<Jet>> J;
        J.reserve(picked.size());
        for (int t : picked) {
            std::vector<Jet> row;
            row.reserve(static_cast<size_t>(p));
            for (int i = 0; i < p; ++i) {
                PolyOverJets d = eqs[static_cast<size_t>(t)].partial(i);
                if (d.terms.empty())
                    row.push_back(Jet(u[0].nvars(), u[0].order(), u[0].prec(), u[0].hard_zero()));
                else
                    row.push_back(d.eval(u));
            }
            J.push_back(std::move(row));
        }
        std::vector<Jet> delta = detail::solve_linear_jets(std::move(J), std::move(R),
                                                           cfg.pivot_floor);
        for (int i = 0; i < p; ++i) u[static_cast<size_t>(i)] += delta[static_cast<size_t>(i)];
    }

    // Validity of the solution is capped by the equations' coefficients.
    int v = u.empty() ? 0 : u[0].order();
    for (const auto& e : eqs) v = std::min(v, e.min_coeff_valid());
    for (auto& ui : u) ui.set_valid(v);

    Real extra(prec);
    for (int t = 0; t < q; ++t) {
        bool is_picked = std::binary_search(picked.begin(), picked.end(), t);
        if (is_picked) continue;
        Real m = eqs[static_cast<size_t>(t)].eval(u).max_abs_coeff(v);
        if (m > extra) extra = m;
    }
    out.residual_extra = extra;
    out.solution = std::move(u);
    return out;
}

}  // namespace nash
