#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "nash/errors.hpp"
#include "nash/genericity.hpp"
#include "nash/jet.hpp"
#include "nash/linalg.hpp"
#include "nash/multipoly.hpp"
#include "nash/newton.hpp"
#include "nash/resultant.hpp"
#include "nash/tougeron.hpp"
#include "nash/tsystem.hpp"
#include "nash/variety.hpp"
#include "nash/weierstrass.hpp"

namespace nash {

/// Knobs shared by every stage of the approximation pipeline.
struct ApproxConfig {
    std::uint64_t seed = 2026;
    mpfr_prec_t precision = 128;
    double admission_tol = 1e-9;
    double tougeron_tol = 1e-12;
    double hard_zero = 1e-30;
    int max_tries = 32;
    int max_depth = 8;
    /// Dimension of the graph variety in the system entry point; -1 lets
    /// the Groebner machinery compute it.
    int declared_dim = -1;
};

/// One approximation task: a target variety, the jet at the origin of a
/// holomorphic map into it, and the truncation degrees to produce.
struct ApproxProblem {
    VarietySpec variety;
    std::vector<Jet> solution_jet;
    std::vector<int> nu_list;
    ApproxConfig config;
};

/// An algebraic function germ: a branch singled out by its jet, plus a
/// monic squarefree witness polynomial over C[x] vanishing on it. The
/// witness lives in the ring (x_1..x_n, z) with z last.
struct NashFunction {
    UniOverPoly annihilator;
    Jet jet = Jet(0, 0);
    int valid_order = 0;
};

/// Output for a single truncation degree.
struct NuResult {
    int nu = 0;
    std::vector<NashFunction> components;
    std::vector<int> annihilator_degrees;
    Real key_residual;          ///< defect of P_L(f, fbar) = R * (dP_L/dz(f, fbar))^2
    Real correction_size;       ///< sampled sup |ftilde_nu - fbar|
    Real correction_bound;      ///< sampled 2 sup |R * dP_L/dz(F, fbar)|
    Real lift_residual;         ///< fiber system residual at the lifted tuple
    Real variety_residual;      ///< input generators evaluated on the output jets
    Real annihilator_residual;  ///< worst witness evaluated on its own branch
    Real distance;              ///< max coefficient distance to the input jets
};

struct ApproxResult {
    int order = 0;
    std::vector<NuResult> per_nu;
    std::vector<ChangeRecord> changes;
    std::vector<std::string> trace;
    bool degree_stable = true;
};

namespace detail {

inline Jet eval_at_jets(const MultiPoly& p, const std::vector<Jet>& images) {
    if (images.empty()) throw InternalError("eval_at_jets: no images");
    const Jet& model = images.front();
    return Jet::from_poly(p, model.order(), model.prec(), model.hard_zero()).compose(images);
}

inline Jet row_combination(const QMatrix& M, int row, const std::vector<Jet>& jets) {
    const Jet& model = jets.front();
    Jet acc(model.nvars(), model.order(), model.prec(), model.hard_zero());
    for (int j = 0; j < static_cast<int>(jets.size()); ++j) {
        const mpq_class& q = M.at(row, j);
        if (q == 0) continue;
        acc += jets[static_cast<size_t>(j)].scale(Complex::of_rat(GaussRat(q), model.prec()));
    }
    return acc;
}

inline std::vector<Jet> apply_matrix(const QMatrix& M, const std::vector<Jet>& jets) {
    std::vector<Jet> out;
    out.reserve(jets.size());
    for (int i = 0; i < static_cast<int>(jets.size()); ++i)
        out.push_back(row_combination(M, i, jets));
    return out;
}

inline Jet apply_form(const std::vector<GaussRat>& L, const std::vector<Jet>& jets, int from) {
    const Jet& model = jets.front();
    Jet acc(model.nvars(), model.order(), model.prec(), model.hard_zero());
    for (size_t j = 0; j < L.size(); ++j) {
        if (L[j].is_zero()) continue;
        acc += jets[static_cast<size_t>(from) + j].scale(Complex::of_rat(L[j], model.prec()));
    }
    return acc;
}

inline Real residual_on(const std::vector<MultiPoly>& gens, const std::vector<Jet>& jets) {
    mpfr_prec_t prec = jets.empty() ? 128 : jets.front().prec();
    Real worst = Real::of(0.0, prec);
    for (const MultiPoly& g : gens) {
        Jet v = eval_at_jets(g, jets);
        worst = max(worst, v.max_abs_coeff(v.valid()));
    }
    return worst;
}

inline bool uses_var(const MultiPoly& p, int var) {
    for (const auto& [e, c] : p.terms())
        if (e[static_cast<size_t>(var)] > 0) return true;
    return false;
}

inline std::vector<std::string> numbered_names(const std::string& stem, int count) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(count));
    for (int i = 1; i <= count; ++i) names.push_back(stem + std::to_string(i));
    return names;
}

inline int computed_dimension(const std::vector<std::string>& names,
                              const std::vector<MultiPoly>& gens) {
    VarietySpec probe;
    probe.base_vars = names;
    probe.declared_dim = 0;
    probe.generators = gens;
    return variety_dimension(probe);
}

}  // namespace detail

/// Stage 1 artifacts: the variety repositioned and cut down until the
/// eliminant along the chosen form has a discriminant that survives on
/// the base components of the jet.
struct HypersurfaceData {
    int m = 0;
    int s = 0;
    int descents = 0;
    std::vector<ChangeRecord> changes;
    VarietySpec variety;
    std::vector<GaussRat> L;
    UniOverPoly P_L;
    MultiPoly R_L;
    std::vector<Jet> ambient;  ///< all components, transformed coordinates
    Jet ftilde = Jet(0, 0);    ///< the form applied to the fiber components
};

inline HypersurfaceData reduce_to_hypersurface(const VarietySpec& V0,
                                               const std::vector<Jet>& jets0,
                                               const ApproxConfig& cfg, int fixed_prefix = 0,
                                               std::vector<std::string>* trace = nullptr) {
    HypersurfaceData out;
    VarietySpec V = V0;
    out.ambient = jets0;
    int rounds = V0.declared_dim;
    for (int round = 0;; ++round) {
        if (round > rounds)
            throw InternalError("reduce_to_hypersurface: descent failed to terminate");
        ProperPosition pos =
            find_proper_position(V, cfg.seed + static_cast<std::uint64_t>(round), cfg.max_tries,
                                 fixed_prefix);
        if (!pos.change.is_identity()) {
            out.ambient = detail::apply_matrix(pos.change.inverse, out.ambient);
            out.changes.push_back(pos.change);
        }
        V = std::move(pos.variety);
        int m = V.declared_dim;
        int s = V.fiber_count();
        std::vector<GaussRat> L = choose_linear_form(
            V, cfg.seed + 101 * static_cast<std::uint64_t>(round) + 7, cfg.max_tries);
        UniOverPoly P = optimal_polynomial(V, L);
        MultiPoly R = discriminant(P);
        bool vanishes;
        if (m == 0) {
            vanishes = R.is_zero();
        } else {
            std::vector<Jet> images(out.ambient.begin(), out.ambient.begin() + m);
            const Jet& model = images.front();
            images.push_back(Jet(model.nvars(), model.order(), model.prec(), model.hard_zero()));
            Jet val = detail::eval_at_jets(R, images);
            vanishes = val.max_abs_coeff(val.valid()).cmp(cfg.admission_tol) <= 0;
        }
        if (!vanishes) {
            out.m = m;
            out.s = s;
            out.variety = std::move(V);
            out.L = std::move(L);
            out.P_L = std::move(P);
            out.R_L = std::move(R);
            out.ftilde = detail::apply_form(out.L, out.ambient, m);
            if (trace)
                trace->push_back("hypersurface: m=" + std::to_string(m) + " s=" +
                                 std::to_string(s) + " deg=" + std::to_string(out.P_L.degree()) +
                                 " descents=" + std::to_string(out.descents));
            return out;
        }
        if (m == 0)
            throw PipelineError(
                "reduce_to_hypersurface: dimension exhausted; the declared dimension is "
                "inconsistent with the solution jet");
        std::vector<int> where(static_cast<size_t>(m) + 1, -1);
        for (int i = 0; i < m; ++i) where[static_cast<size_t>(i)] = i;
        V.generators.push_back(R.map_vars(m + s, where));
        V.declared_dim = m - 1;
        std::vector<std::string> names = V.all_names();
        V.base_vars.assign(names.begin(), names.begin() + (m - 1));
        V.fiber_vars.assign(names.begin() + (m - 1), names.end());
        ++out.descents;
        if (trace)
            trace->push_back("descent: discriminant vanishes on the jet, m=" +
                             std::to_string(m - 1));
    }
}

/// Stage 2 artifacts: Weierstrass data of u = dP_L/dz(F, ftilde) after a
/// source change making the last variable regular for it.
struct DivisionData {
    ChangeRecord source_change;
    int d = 0;
    Jet u = Jet(0, 0);     ///< the derivative jet, transformed source coordinates
    Jet unit = Jet(0, 0);  ///< u = unit * W
    JetPoly W;
    std::vector<Jet> base;  ///< F components, transformed source coordinates
    Jet ftilde = Jet(0, 0);
    std::vector<Jet> H;     ///< quotients of the base components by W^2
    std::vector<JetPoly> r; ///< remainders, degree below 2d
    Jet Htilde = Jet(0, 0);
    JetPoly rtilde;
};

inline DivisionData prepare_division_data(const UniOverPoly& P_L, const std::vector<Jet>& base,
                                          const Jet& ftilde, const ApproxConfig& cfg) {
    DivisionData out;
    int n = ftilde.nvars();
    int D = ftilde.order();
    mpfr_prec_t prec = ftilde.prec();
    double hz = ftilde.hard_zero();

    std::vector<Jet> images = base;
    images.push_back(ftilde);
    Jet u0 = detail::eval_at_jets(P_L.derivative().to_multipoly(), images);
    if (u0.max_abs_coeff(u0.valid()).cmp(cfg.admission_tol) <= 0)
        throw PipelineError(
            "prepare_division_data: dP_L/dz vanishes on the jet, which a squarefree "
            "eliminant with nonvanishing discriminant rules out");

    RegularDirection rd = find_regular_direction(u0, cfg.seed, cfg.max_tries);
    out.source_change = rd.change;
    out.u = rd.jet;
    out.d = rd.d;
    if (D < 2 * out.d + 2)
        throw PipelineError("prepare_division_data: jet order " + std::to_string(D) +
                            " is below 2d+2 = " + std::to_string(2 * out.d + 2) +
                            "; raise the input order");
    bool ident = out.source_change.is_identity();
    for (const Jet& b : base) out.base.push_back(ident ? b : out.source_change.apply(b));
    out.ftilde = ident ? ftilde : out.source_change.apply(ftilde);

    if (out.d == 0) {
        out.unit = out.u;
        out.W = JetPoly(n - 1, n);
        out.W.coeffs.push_back(
            Jet::constant(n - 1, D, Complex::of(1.0, 0.0, prec), prec, hz));
        out.H = out.base;
        out.Htilde = out.ftilde;
        out.r.assign(out.base.size(), JetPoly(n - 1, n));
        out.rtilde = JetPoly(n - 1, n);
        return out;
    }
    WeierstrassFactor wf = weierstrass_prepare(out.u, n - 1);
    out.unit = wf.unit;
    out.W = wf.w;
    for (const Jet& b : out.base) {
        WeierstrassDivision dv = weierstrass_divide(b, out.W, 2);
        out.H.push_back(std::move(dv.quotient));
        out.r.push_back(std::move(dv.remainder));
    }
    WeierstrassDivision dv = weierstrass_divide(out.ftilde, out.W, 2);
    out.Htilde = std::move(dv.quotient);
    out.rtilde = std::move(dv.remainder);
    return out;
}

/// The coefficient jets of W and of the remainder rows, in the slot order
/// of the matching TSystem: a_1..a_d, then the b rows, then the c row.
inline std::vector<Jet> coefficient_tuple(const DivisionData& dd, int m) {
    int d = dd.d;
    Jet zero(dd.u.nvars() - 1, dd.u.order(), dd.u.prec(), dd.u.hard_zero());
    auto padded = [&](const JetPoly& p, int k) { return k <= p.degree() ? p.coeff_of(k) : zero; };
    std::vector<Jet> g;
    g.reserve(static_cast<size_t>(d * (2 * m + 3)));
    for (int k = 1; k <= d; ++k) g.push_back(dd.W.coeff_of(d - k));
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < 2 * d; ++l) g.push_back(padded(dd.r[static_cast<size_t>(j)],
                                                           2 * d - 1 - l));
    for (int l = 0; l < 2 * d; ++l) g.push_back(padded(dd.rtilde, 2 * d - 1 - l));
    return g;
}

namespace detail {
inline ApproxResult approximate_into_variety_impl(const ApproxProblem& P, int depth,
                                                  int fixed_prefix,
                                                  std::vector<std::string>* trace);
}

/// Stage 3: the coefficient tuple either consists of constants (source
/// dimension one) or becomes the solution jet of a recursive instance on
/// the zero set of the T-system. Returns one Nash tuple per requested nu,
/// in the slot order of the coefficients.
inline std::vector<std::vector<NashFunction>> recurse_or_base(
    const TSystem& sys, const std::vector<Jet>& g, const std::vector<int>& nu_list,
    const ApproxConfig& cfg, int depth, std::vector<std::string>* trace = nullptr) {
    if (g.empty()) throw PreconditionError("recurse_or_base: empty coefficient tuple");
    const Jet& model = g.front();

    std::vector<MultiPoly> tpolys;
    for (const MultiPoly& t : sys.T)
        if (!t.is_zero()) tpolys.push_back(t);
    Real res = detail::residual_on(tpolys, g);
    if (res.cmp(cfg.admission_tol) > 0)
        throw PreconditionError(
            "recurse_or_base: coefficient jets violate the remainder system, residual " +
            std::to_string(res.to_double()));

    if (model.nvars() == 0) {
        std::vector<NashFunction> comps;
        comps.reserve(g.size());
        for (const Jet& c : g) {
            MultiPoly gamma = c.to_poly_dyadic().map_vars(1, {});
            NashFunction nf;
            nf.annihilator = UniOverPoly::from_multipoly(MultiPoly::variable(1, 0) - gamma, 0);
            nf.jet = c;
            nf.valid_order = c.valid();
            comps.push_back(std::move(nf));
        }
        if (trace)
            trace->push_back("base case: " + std::to_string(g.size()) +
                             " constant coefficients");
        return std::vector<std::vector<NashFunction>>(nu_list.size(), comps);
    }

    if (depth + 1 > cfg.max_depth)
        throw ExhaustionError("recurse_or_base: recursion depth limit " +
                              std::to_string(cfg.max_depth) + " reached");
    std::vector<std::string> names = sys.coeff_names();
    int N = static_cast<int>(names.size());
    int dim = tpolys.empty() ? N : detail::computed_dimension(names, tpolys);
    if (dim < 0)
        throw InternalError("recurse_or_base: the remainder system generates the unit ideal");
    if (trace)
        trace->push_back("recursion: " + std::to_string(N) + " coefficients in " +
                         std::to_string(model.nvars()) + " variables, dim " +
                         std::to_string(dim));
    ApproxProblem sub;
    sub.variety.base_vars.assign(names.begin(), names.begin() + dim);
    sub.variety.fiber_vars.assign(names.begin() + dim, names.end());
    sub.variety.declared_dim = dim;
    sub.variety.generators = tpolys;
    sub.solution_jet = g;
    sub.nu_list = nu_list;
    sub.config = cfg;
    sub.config.seed = cfg.seed + 1000003 * static_cast<std::uint64_t>(depth + 1);
    ApproxResult rec = detail::approximate_into_variety_impl(sub, depth + 1, 0, trace);

    std::vector<std::vector<NashFunction>> out;
    out.reserve(rec.per_nu.size());
    for (const NuResult& nr : rec.per_nu) {
        std::vector<Jet> jets;
        jets.reserve(nr.components.size());
        for (const NashFunction& nf : nr.components) jets.push_back(nf.jet);
        Real post = detail::residual_on(tpolys, jets);
        if (post.cmp(cfg.admission_tol) > 0)
            throw PipelineError(
                "recurse_or_base: recursive approximation leaves remainder-system residual " +
                std::to_string(post.to_double()));
        out.push_back(nr.components);
    }
    return out;
}

/// Stage 4 artifacts for one nu: the candidate base components, the
/// corrected-to-be branch value along the form, and the defect multiplier.
struct Candidate {
    std::vector<Jet> f;
    Jet fbar = Jet(0, 0);
    Jet dP = Jet(0, 0);  ///< dP_L/dz evaluated at (f, fbar)
    Jet R = Jet(0, 0);
    Real key_residual;
};

inline Candidate assemble_candidates(const DivisionData& dd, const TSystem* sys,
                                     const std::vector<Jet>& gnu, const UniOverPoly& P_L,
                                     int nu, const ApproxConfig& cfg) {
    Candidate out;
    int n = dd.ftilde.nvars();
    int D = dd.ftilde.order();
    mpfr_prec_t prec = dd.ftilde.prec();
    double hz = dd.ftilde.hard_zero();

    if (dd.d == 0) {
        for (const Jet& h : dd.H) out.f.push_back(h.truncate(nu));
        out.fbar = dd.Htilde.truncate(nu);
    } else {
        int d = dd.d;
        int m = sys->m;
        JetPoly W(n - 1, n);
        W.coeffs.push_back(Jet::constant(n - 1, D, Complex::of(1.0, 0.0, prec), prec, hz));
        for (int k = 1; k <= d; ++k) W.coeffs.push_back(gnu[static_cast<size_t>(k - 1)]);
        Jet Wj = W.to_jet(D);
        Jet W2 = Wj * Wj;
        for (int i = 0; i < m; ++i) {
            JetPoly row(n - 1, n);
            for (int l = 0; l < 2 * d; ++l)
                row.coeffs.push_back(gnu[static_cast<size_t>(d + i * 2 * d + l)]);
            out.f.push_back(dd.H[static_cast<size_t>(i)].truncate(nu) * W2 + row.to_jet(D));
        }
        JetPoly row(n - 1, n);
        for (int l = 0; l < 2 * d; ++l)
            row.coeffs.push_back(gnu[static_cast<size_t>(d + 2 * d * m + l)]);
        out.fbar = dd.Htilde.truncate(nu) * W2 + row.to_jet(D);
    }

    std::vector<Jet> at = out.f;
    at.push_back(out.fbar);
    Jet lhs = detail::eval_at_jets(P_L.to_multipoly(), at);
    out.dP = detail::eval_at_jets(P_L.derivative().to_multipoly(), at);

    if (dd.d == 0) {
        try {
            Jet inv = out.dP.invert_unit();
            out.R = lhs * inv * inv;
        } catch (const PreconditionError&) {
            throw PipelineError(
                "assemble_candidates: dP_L/dz lost its unit constant term; raise nu or the "
                "jet order");
        }
    } else {
        std::vector<int> lift(static_cast<size_t>(n - 1));
        std::iota(lift.begin(), lift.end(), 0);
        std::vector<Jet> images(static_cast<size_t>(sys->full_vars()),
                                Jet(n, D, prec, hz));
        images[static_cast<size_t>(sys->t_slot())] = Jet::coordinate(n, D, n - 1, prec, hz);
        for (int c = 0; c < sys->coeff_vars(); ++c)
            images[static_cast<size_t>(c + 1)] = gnu[static_cast<size_t>(c)].map_vars(n, lift);
        for (int j = 1; j <= sys->m; ++j)
            images[static_cast<size_t>(sys->s_slot(j))] =
                dd.H[static_cast<size_t>(j - 1)].truncate(nu);
        images[static_cast<size_t>(sys->stilde_slot())] = dd.Htilde.truncate(nu);
        Jet wt = detail::eval_at_jets(sys->Wtilde, images);
        Jet wb = detail::eval_at_jets(sys->Wbar, images);
        try {
            Jet inv = wb.invert_unit();
            out.R = wt * inv * inv;
        } catch (const PreconditionError&) {
            throw PipelineError(
                "assemble_candidates: the truncated unit evaluates to a non-unit; raise nu "
                "or the jet order");
        }
    }

    Jet gap = lhs - out.R * out.dP * out.dP;
    out.key_residual = gap.max_abs_coeff(gap.valid());
    return out;
}

/// Stage 5 artifacts for one nu.
struct LiftData {
    Jet ftilde_nu = Jet(0, 0);
    std::vector<Jet> G;
    Real correction_size;
    Real correction_bound;
    Real residual;
};

inline LiftData correct_and_lift(const UniOverPoly& P_L, const Candidate& cand,
                                 const VarietySpec& V, const std::vector<GaussRat>& L,
                                 const std::vector<Jet>& G0, const ApproxConfig& cfg) {
    LiftData out;
    const Jet& model = cand.fbar;
    int n = model.nvars();
    int D = model.order();
    mpfr_prec_t prec = model.prec();
    double hz = model.hard_zero();

    ZPoly A;
    std::vector<Jet> at = cand.f;
    at.push_back(Jet(n, D, prec, hz));
    for (int k = 0; k <= P_L.degree(); ++k)
        A.c.push_back(detail::eval_at_jets(P_L.coeff_of(k), at));
    TougeronConfig tc;
    tc.tol = cfg.tougeron_tol;
    tc.hypothesis_tol = cfg.admission_tol;
    tc.seed = cfg.seed;
    TougeronOutcome to = tougeron_correct(A, cand.fbar, cand.R, tc);
    out.ftilde_nu = to.b;
    out.correction_size = to.bound_lhs;
    out.correction_bound = to.bound_rhs;

    int m = V.base_count();
    int s = V.fiber_count();
    std::vector<PolyOverJets> eqs;
    if (m == 0) {
        for (const MultiPoly& g : V.generators) {
            PolyOverJets e;
            e.nunknowns = s;
            for (const auto& [ex, c] : g.terms())
                e.add(ex, Jet::constant(n, D, Complex::of_rat(c, prec), prec, hz));
            eqs.push_back(std::move(e));
        }
    } else {
        std::map<int, Jet> base_images;
        for (int i = 0; i < m; ++i) base_images.emplace(i, cand.f[static_cast<size_t>(i)]);
        std::vector<int> slot(static_cast<size_t>(m + s), -1);
        for (int j = 0; j < s; ++j) slot[static_cast<size_t>(m + j)] = j;
        for (const MultiPoly& g : V.generators)
            eqs.push_back(PolyOverJets::split(g, slot, s, base_images, D, prec, hz));
    }
    PolyOverJets lin;
    lin.nunknowns = s;
    for (int j = 0; j < s; ++j) {
        if (L[static_cast<size_t>(j)].is_zero()) continue;
        Exps e(static_cast<size_t>(s), 0);
        e[static_cast<size_t>(j)] = 1;
        lin.add(e, Jet::constant(n, D, Complex::of_rat(L[static_cast<size_t>(j)], prec), prec,
                                 hz));
    }
    lin.add(Exps(static_cast<size_t>(s), 0), -out.ftilde_nu);
    eqs.push_back(std::move(lin));

    Real initial = Real::of(0.0, prec);
    for (const PolyOverJets& e : eqs) {
        Jet v = e.eval(G0);
        initial = max(initial, v.max_abs_coeff(v.valid()));
    }
    if (initial.cmp(cfg.tougeron_tol) <= 0) {
        out.G = G0;
        out.residual = initial;
        return out;
    }
    NewtonConfig nc;
    nc.tol = cfg.tougeron_tol;
    NewtonOutcome no = newton_solve(eqs, G0, nc);
    out.G = std::move(no.solution);
    out.residual = max(no.residual, no.residual_extra);
    return out;
}

namespace detail {

/// Witness polynomial for a base component f_i = H_i^nu W^2 + r_i, built
/// by eliminating each coefficient function against its own witness with
/// iterated resultants.
inline UniOverPoly base_component_annihilator(const Jet& Htrunc, int i, int d,
                                              const std::vector<NashFunction>& gN, int n) {
    MultiPoly Hpoly = Htrunc.to_poly_dyadic();
    if (d == 0) {
        std::vector<int> where(static_cast<size_t>(n));
        std::iota(where.begin(), where.end(), 0);
        return UniOverPoly::from_multipoly(
            MultiPoly::variable(n + 1, n) - Hpoly.map_vars(n + 1, where), n);
    }
    int N = static_cast<int>(gN.size());
    int big = n + N + 1;
    int zslot = n + N;
    std::vector<int> where(static_cast<size_t>(n));
    std::iota(where.begin(), where.end(), 0);

    MultiPoly xn = MultiPoly::variable(big, n - 1);
    MultiPoly W = xn.pow(static_cast<unsigned>(d));
    for (int k = 1; k <= d; ++k)
        W += MultiPoly::variable(big, n + (k - 1)) * xn.pow(static_cast<unsigned>(d - k));
    MultiPoly row = MultiPoly::constant(big, GaussRat(0));
    for (int l = 0; l < 2 * d; ++l)
        row += MultiPoly::variable(big, n + d + i * 2 * d + l) *
               xn.pow(static_cast<unsigned>(2 * d - 1 - l));
    MultiPoly acc = MultiPoly::variable(big, zslot) -
                    (Hpoly.map_vars(big, where) * W * W + row);

    for (int c = 0; c < N; ++c) {
        if (!uses_var(acc, n + c)) continue;
        const UniOverPoly& Q = gN[static_cast<size_t>(c)].annihilator;
        std::vector<int> qw(static_cast<size_t>(Q.nvars));
        for (int v = 0; v + 1 < Q.nvars; ++v) qw[static_cast<size_t>(v)] = v;
        qw[static_cast<size_t>(Q.nvars - 1)] = n + c;
        acc = resultant(acc, Q.to_multipoly().map_vars(big, qw), n + c);
    }
    std::vector<int> down(static_cast<size_t>(big), -1);
    for (int v = 0; v < n; ++v) down[static_cast<size_t>(v)] = v;
    down[static_cast<size_t>(zslot)] = n;
    UniOverPoly out = UniOverPoly::from_multipoly(acc.map_vars(n + 1, down), n);
    if (out.degree() < 1)
        throw PipelineError("compute_annihilators: witness collapsed to a constant");
    return squarefree_part(out);
}

/// Witness polynomial for a fiber component: the monic eliminant of the
/// projection of {z in V, P_i(x, z_i) = 0 for the base block} onto the
/// target coordinate.
inline UniOverPoly fiber_component_annihilator(const VarietySpec& V,
                                               const std::vector<UniOverPoly>& basePolys,
                                               int target, int n) {
    int m = V.base_count();
    int s = V.fiber_count();
    int total = m + s;
    VarietySpec E;
    E.base_vars = numbered_names("x", n);
    E.fiber_vars = numbered_names("w", total);
    E.declared_dim = n;
    std::vector<int> vw(static_cast<size_t>(total));
    for (int j = 0; j < total; ++j) vw[static_cast<size_t>(j)] = n + j;
    for (const MultiPoly& g : V.generators)
        E.generators.push_back(g.map_vars(n + total, vw));
    for (int i = 0; i < m; ++i) {
        std::vector<int> pw(static_cast<size_t>(n) + 1);
        std::iota(pw.begin(), pw.end(), 0);
        pw[static_cast<size_t>(n)] = n + i;
        E.generators.push_back(basePolys[static_cast<size_t>(i)].to_multipoly().map_vars(
            n + total, pw));
    }
    std::vector<GaussRat> sel(static_cast<size_t>(total), GaussRat(0));
    sel[static_cast<size_t>(m + target)] = GaussRat(1);
    try {
        return optimal_polynomial(E, sel);
    } catch (const PreconditionError& e) {
        throw PipelineError(std::string("compute_annihilators: eliminant not monic, "
                                        "properness lost (") +
                            e.what() + ")");
    }
}

inline int unit_row(const QMatrix& M, int row) {
    int hit = -1;
    for (int j = 0; j < M.cols(); ++j) {
        const mpq_class& q = M.at(row, j);
        if (q == 0) continue;
        if (q != 1 || hit >= 0) return -1;
        hit = j;
    }
    return hit;
}

/// Undoes accumulated ambient changes: original components are integer
/// combinations of the working ones, so each non-coordinate row gets a
/// closure eliminant over the joint witness variety.
inline std::vector<NashFunction> undo_ambient(const std::vector<NashFunction>& comps,
                                              const std::vector<ChangeRecord>& changes,
                                              int n) {
    if (changes.empty()) return comps;
    QMatrix M = changes.front().matrix;
    for (size_t k = 1; k < changes.size(); ++k) M = M * changes[k].matrix;
    int total = static_cast<int>(comps.size());
    if (M == QMatrix::identity(total)) return comps;

    VarietySpec E;
    E.base_vars = numbered_names("x", n);
    E.fiber_vars = numbered_names("w", total);
    E.declared_dim = n;
    for (int j = 0; j < total; ++j) {
        std::vector<int> pw(static_cast<size_t>(n) + 1);
        std::iota(pw.begin(), pw.end(), 0);
        pw[static_cast<size_t>(n)] = n + j;
        E.generators.push_back(
            comps[static_cast<size_t>(j)].annihilator.to_multipoly().map_vars(n + total, pw));
    }
    std::vector<Jet> jets;
    jets.reserve(comps.size());
    for (const NashFunction& c : comps) jets.push_back(c.jet);

    std::vector<NashFunction> out(static_cast<size_t>(total));
    for (int i = 0; i < total; ++i) {
        int j = unit_row(M, i);
        if (j >= 0) {
            out[static_cast<size_t>(i)] = comps[static_cast<size_t>(j)];
            continue;
        }
        std::vector<GaussRat> rowForm;
        rowForm.reserve(static_cast<size_t>(total));
        for (int c = 0; c < total; ++c) rowForm.push_back(GaussRat(M.at(i, c)));
        UniOverPoly A;
        try {
            A = optimal_polynomial(E, rowForm);
        } catch (const PreconditionError& e) {
            throw PipelineError(std::string("compute_annihilators: eliminant not monic while "
                                            "undoing the ambient change (") +
                                e.what() + ")");
        }
        Jet jet = row_combination(M, i, jets);
        out[static_cast<size_t>(i)] = NashFunction{std::move(A), jet, jet.valid()};
    }
    return out;
}

/// Undoes the source change: the jet is reparametrized and the witness
/// gets the inverse substitution on its x block, which keeps it monic in z.
inline NashFunction undo_source(const NashFunction& f, const ChangeRecord& S, int n) {
    QMatrix B = QMatrix::identity(n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B.at(i, j) = S.inverse.at(i, j);
    NashFunction out;
    out.annihilator =
        UniOverPoly::from_multipoly(f.annihilator.to_multipoly().substitute_linear(B), n);
    out.jet = S.undo(f.jet);
    out.valid_order = out.jet.valid();
    return out;
}

}  // namespace detail

/// Stage 6: witness polynomials for every component, in the coordinates of
/// the input problem.
inline std::vector<NashFunction> compute_annihilators(const HypersurfaceData& hd,
                                                      const DivisionData& dd,
                                                      const std::vector<NashFunction>& gN,
                                                      const Candidate& cand,
                                                      const LiftData& lift, int nu) {
    int n = hd.ftilde.nvars();
    std::vector<NashFunction> comps;
    comps.reserve(static_cast<size_t>(hd.m + hd.s));
    std::vector<UniOverPoly> basePolys;
    basePolys.reserve(static_cast<size_t>(hd.m));
    for (int i = 0; i < hd.m; ++i) {
        UniOverPoly A = detail::base_component_annihilator(
            dd.H[static_cast<size_t>(i)].truncate(nu), i, dd.d, gN, n);
        basePolys.push_back(A);
        const Jet& jet = cand.f[static_cast<size_t>(i)];
        comps.push_back(NashFunction{std::move(A), jet, jet.valid()});
    }
    for (int j = 0; j < hd.s; ++j) {
        UniOverPoly A = detail::fiber_component_annihilator(hd.variety, basePolys, j, n);
        const Jet& jet = lift.G[static_cast<size_t>(j)];
        comps.push_back(NashFunction{std::move(A), jet, jet.valid()});
    }
    comps = detail::undo_ambient(comps, hd.changes, n);
    if (!dd.source_change.is_identity())
        for (NashFunction& c : comps) c = detail::undo_source(c, dd.source_change, n);
    return comps;
}

namespace detail {

inline Real annihilator_defect(const UniOverPoly& A, const Jet& f) {
    int n = f.nvars();
    std::vector<Jet> images;
    images.reserve(static_cast<size_t>(n) + 1);
    for (int j = 0; j < n; ++j)
        images.push_back(Jet::coordinate(n, f.order(), j, f.prec(), f.hard_zero()));
    images.push_back(f);
    Jet v = eval_at_jets(A.to_multipoly(), images);
    return v.max_abs_coeff(v.valid());
}

inline void finish_diagnostics(NuResult& nr, const std::vector<MultiPoly>& gens,
                               const std::vector<Jet>& reference, int order) {
    std::vector<Jet> jets;
    jets.reserve(nr.components.size());
    for (const NashFunction& c : nr.components) jets.push_back(c.jet);
    mpfr_prec_t prec = jets.empty() ? 128 : jets.front().prec();
    nr.variety_residual = residual_on(gens, jets);
    nr.annihilator_residual = Real::of(0.0, prec);
    nr.distance = Real::of(0.0, prec);
    nr.annihilator_degrees.clear();
    for (size_t i = 0; i < nr.components.size(); ++i) {
        nr.annihilator_degrees.push_back(nr.components[i].annihilator.degree());
        nr.annihilator_residual =
            max(nr.annihilator_residual,
                annihilator_defect(nr.components[i].annihilator, nr.components[i].jet));
        nr.distance = max(nr.distance, Jet::max_abs_diff(jets[i], reference[i], order));
    }
}

inline ApproxResult approximate_into_variety_impl(const ApproxProblem& P, int depth,
                                                  int fixed_prefix,
                                                  std::vector<std::string>* trace) {
    const ApproxConfig& cfg = P.config;
    P.variety.validate();
    if (P.solution_jet.empty())
        throw InputError("approximate_into_variety: no solution jet components");
    if (static_cast<int>(P.solution_jet.size()) != P.variety.nvars())
        throw InputError("approximate_into_variety: jet component count differs from the "
                         "ambient dimension");
    int n = P.solution_jet.front().nvars();
    int D = P.solution_jet.front().order();
    mpfr_prec_t prec = P.solution_jet.front().prec();
    for (const Jet& j : P.solution_jet)
        if (j.nvars() != n || j.order() != D)
            throw InputError("approximate_into_variety: jet components disagree on the "
                             "source ring");
    if (P.nu_list.empty()) throw InputError("approximate_into_variety: empty nu list");

    Real adm = detail::residual_on(P.variety.generators, P.solution_jet);
    if (adm.cmp(cfg.admission_tol) > 0)
        throw PreconditionError("approximate_into_variety: admission residual " +
                                std::to_string(adm.to_double()) + " exceeds the tolerance");

    ApproxResult out;
    out.order = D;
    std::string tag = "[" + std::to_string(depth) + "] ";

    if (P.variety.generators.empty()) {
        if (trace) trace->push_back(tag + "free ambient: Taylor truncations");
        for (int nu : P.nu_list) {
            NuResult nr;
            nr.nu = nu;
            for (const Jet& j : P.solution_jet) {
                Jet t = j.truncate(nu);
                std::vector<int> where(static_cast<size_t>(n));
                std::iota(where.begin(), where.end(), 0);
                MultiPoly p = t.to_poly_dyadic().map_vars(n + 1, where);
                NashFunction nf;
                nf.annihilator =
                    UniOverPoly::from_multipoly(MultiPoly::variable(n + 1, n) - p, n);
                nf.jet = t;
                nf.valid_order = t.valid();
                nr.components.push_back(std::move(nf));
            }
            nr.key_residual = Real::of(0.0, prec);
            nr.correction_size = Real::of(0.0, prec);
            nr.correction_bound = Real::of(0.0, prec);
            nr.lift_residual = Real::of(0.0, prec);
            detail::finish_diagnostics(nr, P.variety.generators, P.solution_jet, D);
            out.per_nu.push_back(std::move(nr));
        }
    } else {
        HypersurfaceData hd =
            reduce_to_hypersurface(P.variety, P.solution_jet, cfg, fixed_prefix, trace);
        std::vector<Jet> base(hd.ambient.begin(), hd.ambient.begin() + hd.m);
        DivisionData dd = prepare_division_data(hd.P_L, base, hd.ftilde, cfg);
        if (trace)
            trace->push_back(tag + "division: d=" + std::to_string(dd.d) +
                             (dd.source_change.is_identity() ? "" : ", source sheared"));
        std::vector<Jet> G0(hd.ambient.begin() + hd.m, hd.ambient.end());
        if (!dd.source_change.is_identity())
            for (Jet& g : G0) g = dd.source_change.apply(g);

        TSystem sys;
        std::vector<std::vector<NashFunction>> gN(P.nu_list.size());
        if (dd.d >= 1) {
            sys = build_T_system(hd.P_L, hd.m, dd.d);
            std::vector<Jet> g = coefficient_tuple(dd, hd.m);
            gN = recurse_or_base(sys, g, P.nu_list, cfg, depth, trace);
        }

        for (size_t t = 0; t < P.nu_list.size(); ++t) {
            int nu = P.nu_list[t];
            std::vector<Jet> gjets;
            gjets.reserve(gN[t].size());
            for (const NashFunction& nf : gN[t]) gjets.push_back(nf.jet);
            Candidate cand =
                assemble_candidates(dd, dd.d >= 1 ? &sys : nullptr, gjets, hd.P_L, nu, cfg);
            LiftData lift = correct_and_lift(hd.P_L, cand, hd.variety, hd.L, G0, cfg);
            NuResult nr;
            nr.nu = nu;
            nr.components = compute_annihilators(hd, dd, gN[t], cand, lift, nu);
            nr.key_residual = cand.key_residual;
            nr.correction_size = lift.correction_size;
            nr.correction_bound = lift.correction_bound;
            nr.lift_residual = lift.residual;
            detail::finish_diagnostics(nr, P.variety.generators, P.solution_jet, D);
            out.per_nu.push_back(std::move(nr));
            if (trace)
                trace->push_back(tag + "nu=" + std::to_string(nu) + ": variety residual " +
                                 std::to_string(out.per_nu.back().variety_residual.to_double()));
        }
        out.changes = hd.changes;
        if (!dd.source_change.is_identity()) out.changes.push_back(dd.source_change);
    }

    for (size_t t = 1; t < out.per_nu.size(); ++t)
        if (out.per_nu[t].annihilator_degrees != out.per_nu[0].annihilator_degrees)
            out.degree_stable = false;
    return out;
}

}  // namespace detail

/// Produces, for each requested truncation degree, a tuple of algebraic
/// function germs close to the given jet whose values lie on the variety.
inline ApproxResult approximate_into_variety(const ApproxProblem& P) {
    std::vector<std::string> trace;
    ApproxResult r = detail::approximate_into_variety_impl(P, 0, 0, &trace);
    r.trace = std::move(trace);
    return r;
}

namespace detail {

/// Witness for a composed component when the source block of the graph
/// came back altered: eliminates the inverse map against the component
/// witnesses over the joint variety.
inline UniOverPoly composed_annihilator(const std::vector<NashFunction>& comps, int n,
                                        int target) {
    int big = 2 * n + 1;
    VarietySpec E;
    E.base_vars = numbered_names("x", n);
    E.fiber_vars = numbered_names("u", n);
    E.fiber_vars.push_back("w");
    E.declared_dim = n;
    for (int j = 0; j < n; ++j) {
        std::vector<int> pw(static_cast<size_t>(n) + 1);
        for (int v = 0; v < n; ++v) pw[static_cast<size_t>(v)] = n + v;
        pw[static_cast<size_t>(n)] = j;
        E.generators.push_back(
            comps[static_cast<size_t>(j)].annihilator.to_multipoly().map_vars(big, pw));
    }
    std::vector<int> pw(static_cast<size_t>(n) + 1);
    for (int v = 0; v < n; ++v) pw[static_cast<size_t>(v)] = n + v;
    pw[static_cast<size_t>(n)] = 2 * n;
    E.generators.push_back(
        comps[static_cast<size_t>(target)].annihilator.to_multipoly().map_vars(big, pw));
    std::vector<GaussRat> sel(static_cast<size_t>(n) + 1, GaussRat(0));
    sel[static_cast<size_t>(n)] = GaussRat(1);
    try {
        return optimal_polynomial(E, sel);
    } catch (const PreconditionError& e) {
        throw PipelineError(std::string("approximate_solution: no monic witness for the "
                                        "composed component (") +
                            e.what() + ")");
    }
}

}  // namespace detail

/// Entry point for systems of polynomial equations: approximates a jet
/// solution y = f(x) of Q(x, y) = 0 by algebraic function tuples. The
/// equations live in the ring (x_1..x_n, y_1..y_k).
inline ApproxResult approximate_solution(const std::vector<MultiPoly>& Q,
                                         const std::vector<Jet>& f_jet,
                                         const std::vector<int>& nu_list,
                                         const ApproxConfig& cfg) {
    if (f_jet.empty()) throw InputError("approximate_solution: no function components");
    int n = f_jet.front().nvars();
    int D = f_jet.front().order();
    mpfr_prec_t prec = f_jet.front().prec();
    double hz = f_jet.front().hard_zero();
    int k = static_cast<int>(f_jet.size());
    int total = n + k;
    for (const Jet& j : f_jet)
        if (j.nvars() != n || j.order() != D)
            throw InputError("approximate_solution: jet components disagree on the source "
                             "ring");
    std::vector<MultiPoly> gens;
    for (const MultiPoly& q : Q) {
        if (q.nvars() != total)
            throw InputError("approximate_solution: equations must live in the combined "
                             "ring of source and function variables");
        if (!q.is_zero()) gens.push_back(q);
    }

    std::vector<Jet> graph;
    graph.reserve(static_cast<size_t>(total));
    for (int j = 0; j < n; ++j) graph.push_back(Jet::coordinate(n, D, j, prec, hz));
    for (const Jet& j : f_jet) graph.push_back(j);

    Real adm = detail::residual_on(gens, graph);
    if (adm.cmp(cfg.admission_tol) > 0)
        throw PreconditionError("approximate_solution: admission residual " +
                                std::to_string(adm.to_double()) + " exceeds the tolerance");

    std::vector<std::string> names = detail::numbered_names("x", n);
    std::vector<std::string> ynames = detail::numbered_names("y", k);
    names.insert(names.end(), ynames.begin(), ynames.end());
    int dim = cfg.declared_dim;
    if (dim < 0) dim = gens.empty() ? total : detail::computed_dimension(names, gens);
    if (dim < n || dim > total)
        throw InputError("approximate_solution: the zero set of the system has dimension " +
                         std::to_string(dim) + ", which cannot carry a graph over " +
                         std::to_string(n) + " source variables");

    ApproxProblem P;
    P.variety.base_vars.assign(names.begin(), names.begin() + dim);
    P.variety.fiber_vars.assign(names.begin() + dim, names.end());
    P.variety.declared_dim = dim;
    P.variety.generators = gens;
    P.solution_jet = graph;
    P.nu_list = nu_list;
    P.config = cfg;

    std::vector<std::string> trace;
    ApproxResult inner = detail::approximate_into_variety_impl(P, 0, n, &trace);

    ApproxResult out;
    out.order = D;
    out.changes = inner.changes;
    for (const NuResult& nr : inner.per_nu) {
        std::vector<Jet> chi;
        chi.reserve(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) chi.push_back(nr.components[static_cast<size_t>(j)].jet);
        bool ident = true;
        for (int j = 0; j < n; ++j)
            if (Jet::max_abs_diff(chi[static_cast<size_t>(j)], graph[static_cast<size_t>(j)],
                                  D)
                    .cmp(cfg.admission_tol) > 0)
                ident = false;
        std::vector<Jet> H(graph.begin(), graph.begin() + n);
        if (!ident) {
            std::vector<PolyOverJets> eqs;
            for (int j = 0; j < n; ++j) {
                PolyOverJets e;
                e.nunknowns = n;
                for (const auto& [ex, c] : chi[static_cast<size_t>(j)].terms())
                    e.add(ex, Jet::constant(n, D, c, prec, hz));
                e.add(Exps(static_cast<size_t>(n), 0), -graph[static_cast<size_t>(j)]);
                eqs.push_back(std::move(e));
            }
            NewtonConfig nc;
            nc.tol = cfg.tougeron_tol;
            H = newton_solve(eqs, H, nc).solution;
            trace.push_back("source block inverted by iteration");
        }

        NuResult nr2;
        nr2.nu = nr.nu;
        nr2.key_residual = nr.key_residual;
        nr2.correction_size = nr.correction_size;
        nr2.correction_bound = nr.correction_bound;
        nr2.lift_residual = nr.lift_residual;
        for (int i = 0; i < k; ++i) {
            const NashFunction& nf = nr.components[static_cast<size_t>(n + i)];
            NashFunction comp;
            comp.jet = ident ? nf.jet : nf.jet.compose(H);
            comp.annihilator =
                ident ? nf.annihilator : detail::composed_annihilator(nr.components, n, n + i);
            comp.valid_order = comp.jet.valid();
            nr2.components.push_back(std::move(comp));
        }
        std::vector<Jet> full(graph.begin(), graph.begin() + n);
        for (const NashFunction& c : nr2.components) full.push_back(c.jet);
        std::vector<Jet> jets;
        for (const NashFunction& c : nr2.components) jets.push_back(c.jet);
        nr2.variety_residual = detail::residual_on(gens, full);
        nr2.annihilator_residual = Real::of(0.0, prec);
        nr2.distance = Real::of(0.0, prec);
        for (int i = 0; i < k; ++i) {
            nr2.annihilator_degrees.push_back(nr2.components[static_cast<size_t>(i)]
                                                  .annihilator.degree());
            nr2.annihilator_residual =
                max(nr2.annihilator_residual,
                    detail::annihilator_defect(nr2.components[static_cast<size_t>(i)].annihilator,
                                               nr2.components[static_cast<size_t>(i)].jet));
            nr2.distance = max(nr2.distance,
                               Jet::max_abs_diff(jets[static_cast<size_t>(i)],
                                                 f_jet[static_cast<size_t>(i)], D));
        }
        out.per_nu.push_back(std::move(nr2));
    }
    for (size_t t = 1; t < out.per_nu.size(); ++t)
        if (out.per_nu[t].annihilator_degrees != out.per_nu[0].annihilator_degrees)
            out.degree_stable = false;
    out.trace = std::move(trace);
    return out;
}

}  // namespace nash
