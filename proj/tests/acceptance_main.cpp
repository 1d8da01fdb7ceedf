#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nash/approx.hpp"
#include "nash/genericity.hpp"
#include "nash/groebner.hpp"
#include "nash/io.hpp"
#include "nash/poly_text.hpp"
#include "nash/resultant.hpp"
#include "nash/rng.hpp"
#include "nash/tougeron.hpp"
#include "nash/tsystem.hpp"
#include "nash/verify.hpp"
#include "nash/weierstrass.hpp"

using namespace nash;

namespace {

Jet series(int D, const std::vector<mpq_class>& coeffs) {
    Jet j(1, D);
    for (int k = 0; k < static_cast<int>(coeffs.size()) && k <= D; ++k)
        j.set_coeff(Exps{k}, Complex::of_rat(GaussRat(coeffs[k])));
    return j;
}

Jet exp_jet(int D, int sign) {
    std::vector<mpq_class> c(D + 1);
    c[0] = 1;
    for (int k = 1; k <= D; ++k) c[k] = c[k - 1] * mpq_class(sign, k);
    return series(D, c);
}

Jet cos_jet(int D) {
    std::vector<mpq_class> c(D + 1);
    mpq_class f = 1;
    for (int k = 0; k <= D; ++k) {
        if (k) f /= k;
        if (k % 4 == 0) c[k] = f;
        if (k % 4 == 2) c[k] = -f;
    }
    return series(D, c);
}

Jet sin_jet(int D) {
    std::vector<mpq_class> c(D + 1);
    mpq_class f = 1;
    for (int k = 0; k <= D; ++k) {
        if (k) f /= k;
        if (k % 4 == 1) c[k] = f;
        if (k % 4 == 3) c[k] = -f;
    }
    return series(D, c);
}

MultiPoly det_cofactor(const std::vector<std::vector<MultiPoly>>& m, int nvars) {
    size_t n = m.size();
    if (n == 0) return MultiPoly::constant(nvars, GaussRat(1));
    if (n == 1) return m[0][0];
    MultiPoly acc(nvars);
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<MultiPoly>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<MultiPoly> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        MultiPoly term = m[0][j] * det_cofactor(minor, nvars);
        if (j % 2) term = -term;
        acc += term;
    }
    return acc;
}

MultiPoly random_poly(Rng& rng, int nvars, int maxdeg_z, int z_var) {
    MultiPoly p(nvars);
    int dz = static_cast<int>(rng.int_in(1, maxdeg_z));
    for (int k = 0; k <= dz; ++k) {
        for (int dx = 0; dx <= 2; ++dx) {
            if (rng.below(2)) continue;
            long c = rng.int_in(-4, 4);
            if (!c) continue;
            Exps e(static_cast<size_t>(nvars), 0);
            e[0] = dx;
            e[static_cast<size_t>(z_var)] = k;
            p += MultiPoly::monomial(std::move(e), GaussRat(c));
        }
    }
    Exps lead(static_cast<size_t>(nvars), 0);
    lead[static_cast<size_t>(z_var)] = dz;
    if (p.degree_in(z_var) < dz) p += MultiPoly::monomial(std::move(lead), GaussRat(1));
    return p;
}

/// Random monic-in-z polynomial over the first m variables, exercising the
/// remainder-system construction on unitary inputs.
MultiPoly random_unitary(Rng& rng, int m, int maxdeg_z) {
    int nvars = m + 1;
    MultiPoly p(nvars);
    int dz = static_cast<int>(rng.int_in(1, maxdeg_z));
    for (int k = 0; k < dz; ++k) {
        for (int v = 0; v < m; ++v) {
            for (int dx = 0; dx <= 2; ++dx) {
                if (rng.below(2)) continue;
                long c = rng.int_in(-3, 3);
                if (!c) continue;
                Exps e(static_cast<size_t>(nvars), 0);
                e[static_cast<size_t>(v)] = dx;
                e[static_cast<size_t>(m)] = k;
                p += MultiPoly::monomial(std::move(e), GaussRat(c));
            }
        }
    }
    Exps lead(static_cast<size_t>(nvars), 0);
    lead[static_cast<size_t>(m)] = dz;
    p += MultiPoly::monomial(std::move(lead), GaussRat(1));
    return p;
}

struct ApproxFixture {
    ApproxProblem problem;
    ApproxResult result;
};

ApproxFixture run_graph_problem(const std::vector<MultiPoly>& Q, const std::vector<Jet>& jets,
                                const std::vector<std::string>& x_vars,
                                const std::vector<std::string>& y_vars) {
    ApproxFixture fx;
    fx.problem.variety.base_vars = x_vars;
    fx.problem.variety.fiber_vars = y_vars;
    fx.problem.variety.declared_dim = static_cast<int>(x_vars.size());
    fx.problem.variety.generators = Q;
    fx.problem.solution_jet = jets;
    fx.problem.nu_list = {1, 2, 3, 4, 5, 6};
    fx.result = approximate_solution(Q, jets, fx.problem.nu_list, fx.problem.config);
    return fx;
}

bool graph_problem_contract(const ApproxFixture& fx, bool check_unit_product) {
    bool ok = fx.result.degree_stable;
    const std::vector<int>& deg0 = fx.result.per_nu.front().annihilator_degrees;
    Real prev;
    bool first = true;
    for (const auto& nr : fx.result.per_nu) {
        if (check_unit_product) {
            Jet prod = nr.components[0].jet * nr.components[1].jet;
            Jet one = Jet::constant(prod.nvars(), prod.order(),
                                    Complex::of(1.0, 0.0, prod.prec()));
            ok = ok && Jet::max_abs_diff(prod, one, prod.valid()).cmp(1e-9) <= 0;
        }
        ok = ok && nr.variety_residual.cmp(1e-9) <= 0;
        ok = ok && nr.annihilator_residual.cmp(1e-9) <= 0;
        ok = ok && nr.annihilator_degrees == deg0;
        if (!first) ok = ok && nr.distance.cmp(prev) <= 0;
        prev = nr.distance;
        first = false;
    }
    return ok;
}

bool criterion_1() {
    std::vector<std::string> yz = {"y", "z"};
    UniOverPoly quad = UniOverPoly::from_multipoly(parse_poly("z^2-y", yz), 1);
    TSystem sys = build_T_system(quad, 1, 1);
    std::vector<std::string> names = sys.coeff_names();
    bool ok = sys.T.size() == 3;
    ok = ok && sys.T[0] == parse_poly("2*c0*c1-b1_0-2*a1*c0^2", names);
    ok = ok && sys.T[1] == parse_poly("c1^2-b1_1-a1^2*c0^2", names);
    ok = ok && sys.T[2] == parse_poly("2*c1-2*a1*c0", names);
    ok = ok && sys.verify_identities(quad);

    Rng rng(20260819);
    for (int t = 0; t < 5; ++t) {
        int m = static_cast<int>(rng.int_in(1, 2));
        int d = static_cast<int>(rng.int_in(1, 2));
        MultiPoly p = random_unitary(rng, m, 3);
        UniOverPoly P_L = UniOverPoly::from_multipoly(p, m);
        TSystem s = build_T_system(P_L, m, d);
        ok = ok && s.verify_identities(P_L);
    }
    return ok;
}

bool criterion_4(ApproxFixture& out) {
    const int D = 8;
    std::vector<Jet> jets = {exp_jet(D, 1), exp_jet(D, -1)};
    out = run_graph_problem({}, jets, {"x1"}, {"y1", "y2"});
    bool ok = true;
    for (const auto& nr : out.result.per_nu) {
        for (size_t i = 0; i < nr.components.size(); ++i) {
            Jet expect = jets[i].truncate(nr.nu);
            ok = ok && Jet::max_abs_diff(nr.components[i].jet, expect, D).cmp(0.0) == 0;
            ok = ok && nr.components[i].annihilator.degree() == 1;
        }
    }
    return ok;
}

bool criterion_5() {
    const int D = 8;
    Jet alpha0 = series(D, {1, mpq_class(1, 2)});
    ZPoly A0;
    A0.c.push_back(-series(D, {1, 1}));
    A0.c.push_back(Jet(1, D));
    A0.c.push_back(Jet::constant(1, D, Complex::of(1.0, 0.0)));
    Jet c0 = A0.eval(alpha0) * A0.derivative().eval(alpha0).invert_unit().pow(2);
    TougeronOutcome o0 = tougeron_correct(A0, alpha0, c0);
    Jet r0 = A0.eval(o0.b);
    bool ok = r0.max_abs_coeff(r0.valid()).cmp(1e-10) <= 0;
    ok = ok && o0.bound_lhs.cmp(o0.bound_rhs) <= 0;

    Rng rng(424242);
    for (int t = 0; t < 50; ++t) {
        int g = static_cast<int>(rng.int_in(2, 3));
        ZPoly A;
        for (int k = 0; k <= g; ++k) {
            Jet ck(1, D);
            for (int e = 0; e <= 2; ++e) {
                long num = rng.int_in(-4, 4);
                if (k == 1 && e == 0) num = 1;
                if (num) ck.set_coeff(Exps{e}, Complex::of(num / 16.0, 0.0));
            }
            if (k == 1) ck.set_coeff(Exps{0}, Complex::of(1.0, 0.0));
            A.c.push_back(ck);
        }
        Jet alpha(1, D);
        for (int e = 1; e <= 3; ++e)
            alpha.set_coeff(Exps{e}, Complex::of(rng.int_in(-4, 4) / 8.0, 0.0));
        Jet c = A.eval(alpha) * A.derivative().eval(alpha).invert_unit().pow(2);
        TougeronOutcome o = tougeron_correct(A, alpha, c);
        Jet r = A.eval(o.b);
        ok = ok && r.max_abs_coeff(r.valid()).cmp(1e-10) <= 0;
        ok = ok && o.bound_lhs.cmp(o.bound_rhs) <= 0;
    }
    return ok;
}

bool criterion_6() {
    std::vector<std::string> xz = {"x", "z"};
    Rng rng(777);
    bool ok = true;
    for (int t = 0; t < 50; ++t) {
        MultiPoly f = random_poly(rng, 2, 4, 1);
        MultiPoly g = random_poly(rng, 2, 4, 1);
        auto fu = UniOverPoly::from_multipoly(f, 1);
        auto gu = UniOverPoly::from_multipoly(g, 1);
        MultiPoly oracle = det_cofactor(sylvester_matrix(fu, gu), 2);
        ok = ok && resultant(f, g, 1) == oracle;
    }

    std::vector<std::string> bcz = {"b", "c", "z"};
    MultiPoly quad =
        discriminant(UniOverPoly::from_multipoly(parse_poly("z^2+b*z+c", bcz), 2));
    ok = ok && (quad - parse_poly("b^2-4*c", bcz)).is_zero();
    std::vector<std::string> pqz = {"p", "q", "z"};
    MultiPoly cub =
        discriminant(UniOverPoly::from_multipoly(parse_poly("z^3+p*z+q", pqz), 2));
    ok = ok && (cub - parse_poly("-4*p^3-27*q^2", pqz)).is_zero();

    std::vector<std::string> tuv = {"t", "u", "v"};
    std::vector<MultiPoly> gens = {parse_poly("u-t^2", tuv), parse_poly("v-t^3", tuv)};
    IdealBasis blockb = groebner_basis(gens, MonomialOrder::elim_block(3, {0}));
    IdealBasis elim = eliminate(blockb, {0});
    MultiPoly target = parse_poly("v^2-u^3", tuv);
    ok = ok && elim.gens.size() == 1;
    ok = ok && ((elim.gens[0] - target).is_zero() || (elim.gens[0] + target).is_zero());
    return ok;
}

bool criterion_7() {
    Rng rng(31337);
    const int D = 8;
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        int nvars = static_cast<int>(rng.int_in(2, 3));
        int d = static_cast<int>(rng.int_in(1, 3));
        int last = nvars - 1;
        Jet u(nvars, D);
        Exps lead(static_cast<size_t>(nvars), 0);
        lead[static_cast<size_t>(last)] = d;
        u.set_coeff(lead, Complex::of(1.0, 0.0));
        for (int extra = 0; extra < 6; ++extra) {
            Exps e(static_cast<size_t>(nvars), 0);
            int deg = 0;
            for (int v = 0; v < nvars; ++v) {
                e[static_cast<size_t>(v)] = static_cast<int>(rng.below(3));
                deg += e[static_cast<size_t>(v)];
            }
            if (deg > D) continue;
            bool pure_last = true;
            for (int v = 0; v < last; ++v)
                if (e[static_cast<size_t>(v)]) pure_last = false;
            if (pure_last && e[static_cast<size_t>(last)] <= d) continue;
            u.add_coeff(e, Complex::of(rng.int_in(-4, 4) / 8.0, 0.0));
        }

        WeierstrassFactor wf = weierstrass_prepare(u, last);
        Jet recon = wf.unit * wf.w.to_jet(D);
        ok = ok && wf.d == d;
        ok = ok && Jet::max_abs_diff(u, recon, recon.valid()).cmp(1e-10) <= 0;

        int power = static_cast<int>(rng.int_in(1, 2));
        Jet f(nvars, D);
        for (int extra = 0; extra < 6; ++extra) {
            Exps e(static_cast<size_t>(nvars), 0);
            int deg = 0;
            for (int v = 0; v < nvars; ++v) {
                e[static_cast<size_t>(v)] = static_cast<int>(rng.below(3));
                deg += e[static_cast<size_t>(v)];
            }
            if (deg > D) continue;
            f.add_coeff(e, Complex::of(rng.int_in(-4, 4) / 8.0, 0.0));
        }
        WeierstrassDivision dv = weierstrass_divide(f, wf.w, power);
        Jet rhs = dv.quotient * wf.w.to_jet(D).pow(static_cast<unsigned>(power)) +
                  dv.remainder.to_jet(D);
        ok = ok && Jet::max_abs_diff(f, rhs, rhs.valid()).cmp(1e-10) <= 0;
        ok = ok && dv.remainder.degree() < power * d;
    }
    return ok;
}

bool criterion_8() {
    VarietySpec hyper;
    hyper.base_vars = {"y"};
    hyper.fiber_vars = {"v"};
    hyper.declared_dim = 1;
    hyper.generators = {parse_poly("y*v-1", {"y", "v"})};
    ProperPosition p1 = find_proper_position(hyper, 7);
    ProperPosition p2 = find_proper_position(hyper, 7);
    bool ok = !p1.change.is_identity();
    ok = ok && p1.change.matrix == p2.change.matrix;
    ok = ok && properness_check(p1.variety).certified;

    VarietySpec two;
    two.base_vars = {"y"};
    two.fiber_vars = {"v1", "v2"};
    two.declared_dim = 1;
    two.generators = {parse_poly("v1^2-y", {"y", "v1", "v2"}),
                      parse_poly("v2-v1", {"y", "v1", "v2"})};
    std::vector<GaussRat> diff = {GaussRat(1), GaussRat(-1)};
    bool rejected = false;
    try {
        UniOverPoly P = optimal_polynomial(two, diff);
        rejected = P.degree() != 2;
    } catch (const PipelineError&) {
        rejected = true;
    }
    ok = ok && rejected;
    UniOverPoly accepted = optimal_polynomial(two, {GaussRat(1), GaussRat(0)});
    ok = ok && accepted.degree() == 2;
    std::vector<GaussRat> chosen = choose_linear_form(two, 5);
    ok = ok && chosen == std::vector<GaussRat>{GaussRat(1), GaussRat(0)};

    VarietySpec cross;
    cross.base_vars = {"y"};
    cross.fiber_vars = {"v"};
    cross.declared_dim = 1;
    cross.generators = {parse_poly("v^2-y^2", {"y", "v"})};
    ApproxProblem P;
    P.variety = cross;
    P.solution_jet = {Jet(1, 6), Jet(1, 6)};
    P.nu_list = {2, 3};
    ApproxResult r1 = approximate_into_variety(P);
    ApproxResult r2 = approximate_into_variety(P);
    bool descended = false;
    for (const auto& line : r1.trace)
        if (line.find("descents=1") != std::string::npos) descended = true;
    ok = ok && descended;
    ok = ok && result_to_json(r1, {"y"}).dump() == result_to_json(r2, {"y"}).dump();
    for (const auto& nr : r1.per_nu)
        ok = ok && nr.variety_residual.cmp(1e-9) <= 0;
    return ok;
}

bool criterion_9(const std::vector<const ApproxFixture*>& fixtures) {
    bool ok = true;
    for (const ApproxFixture* fx : fixtures) {
        for (size_t k = 0; k < fx->result.per_nu.size(); ++k) {
            const NuResult& nr = fx->result.per_nu[k];
            for (size_t comp = 0; comp < nr.components.size(); ++comp) {
                const Jet& clean = nr.components[comp].jet;
                std::vector<Exps> stored;
                for (const auto& [e, v] : clean.terms()) {
                    int deg = 0;
                    for (int p : e) deg += p;
                    if (deg <= clean.valid()) stored.push_back(e);
                }
                for (const Exps& ex : stored) {
                    ApproxResult bad = fx->result;
                    Jet& jet = bad.per_nu[k].components[comp].jet;
                    jet.set_coeff(ex, jet.coeff(ex) + Complex::of(1e-3, 0.0, jet.prec()));
                    Report rep = verify_result(fx->problem, bad);
                    ok = ok && !rep.all_pass;
                }
            }
        }
    }
    return ok;
}

struct Criterion {
    int number;
    std::string label;
    double budget_seconds;
};

}  // namespace

int main() {
    const int D = 8;
    int failures = 0;

    ApproxFixture uv, circle, taylor;
    bool built_uv = true, built_circle = true;

    auto report = [&](const Criterion& c, bool ok, double seconds) {
        bool pass = ok && seconds < c.budget_seconds;
        std::printf("criterion %d: %s  (%.2fs)  %s\n", c.number, pass ? "PASS" : "FAIL",
                    seconds, c.label.c_str());
        if (!pass) ++failures;
    };

    auto timed = [&](const Criterion& c, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = fn();
        } catch (const Error& e) {
            std::fprintf(stderr, "criterion %d raised: %s\n", c.number, e.what());
            ok = false;
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(c, ok, secs);
    };

    timed({1, "symbolic remainder system identities", 10.0}, [] { return criterion_1(); });

    timed({2, "reciprocal pair end to end", 60.0}, [&] {
        std::vector<MultiPoly> Q = {parse_poly("y1*y2-1", {"x1", "y1", "y2"})};
        try {
            uv = run_graph_problem(Q, {exp_jet(D, 1), exp_jet(D, -1)}, {"x1"}, {"y1", "y2"});
        } catch (const Error&) {
            built_uv = false;
            throw;
        }
        return graph_problem_contract(uv, true);
    });

    timed({3, "circle pair end to end", 60.0}, [&] {
        std::vector<MultiPoly> Q = {parse_poly("y1^2+y2^2-1", {"x1", "y1", "y2"})};
        try {
            circle = run_graph_problem(Q, {cos_jet(D), sin_jet(D)}, {"x1"}, {"y1", "y2"});
        } catch (const Error&) {
            built_circle = false;
            throw;
        }
        return graph_problem_contract(circle, false);
    });

    timed({4, "empty system degenerates to Taylor truncation", 5.0},
          [&] { return criterion_4(taylor); });

    timed({5, "corrected roots and distance bounds", 30.0}, [] { return criterion_5(); });

    timed({6, "exact kernel oracles", 30.0}, [] { return criterion_6(); });

    timed({7, "preparation and division identities", 30.0}, [] { return criterion_7(); });

    timed({8, "position repair, form selection, forced descent", 10.0},
          [] { return criterion_8(); });

    timed({9, "single-coefficient faults flip a verdict", 60.0}, [&] {
        std::vector<const ApproxFixture*> fixtures;
        if (built_uv) fixtures.push_back(&uv);
        if (built_circle) fixtures.push_back(&circle);
        if (!taylor.result.per_nu.empty()) fixtures.push_back(&taylor);
        if (fixtures.size() != 3) return false;
        return criterion_9(fixtures);
    });

    if (failures) {
        std::printf("%d criterion failures\n", failures);
        return 1;
    }
    std::printf("all criteria pass\n");
    return 0;
}
