#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <gmpxx.h>

#include "nash/approx.hpp"
#include "nash/groebner.hpp"
#include "nash/io.hpp"
#include "nash/poly_text.hpp"
#include "nash/tougeron.hpp"
#include "nash/verify.hpp"
#include "nash/weierstrass.hpp"

namespace {

using namespace nash;

struct RunOptions {
    std::string problem;
    int order = 0;
    std::vector<int> nu;
    std::uint64_t seed = 2026;
    int precision = 128;
    double tol = 1e-9;
    int max_tries = 32;
    int max_depth = 8;
    std::string out;
    std::string mode;
    bool verbose = false;
};

double elapsed_ms(std::chrono::steady_clock::time_point from) {
    auto d = std::chrono::steady_clock::now() - from;
    return std::chrono::duration<double, std::milli>(d).count();
}

Jet reduce_order(const Jet& u, int order) {
    Jet r(u.nvars(), order, u.prec(), u.hard_zero());
    for (const auto& [e, c] : u.terms()) {
        int deg = 0;
        for (int k : e) deg += k;
        if (deg <= order) r.set_coeff(e, c);
    }
    return r;
}

ordered_json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw InputError("cannot parse '" + path + "': " + e.what());
    }
}

void validate_run_options(const RunOptions& o) {
    if (o.nu.empty()) throw InputError("nu list must be nonempty");
    for (size_t i = 0; i < o.nu.size(); ++i) {
        if (o.nu[i] < 1) throw InputError("nu values must be positive");
        if (i && o.nu[i] <= o.nu[i - 1]) throw InputError("nu list must be strictly ascending");
    }
    if (o.precision < 64) throw InputError("precision must be at least 64 bits");
    if (o.order && o.order < 2) throw InputError("order must be at least 2");
    if (o.tol <= 0) throw InputError("tolerance must be positive");
    if (o.max_tries < 1 || o.max_depth < 1)
        throw InputError("max-tries and max-depth must be positive");
}

int cmd_run(const RunOptions& o) {
    validate_run_options(o);
    ProblemFile pf = problem_from_json(load_json(o.problem), o.precision);
    if (!o.mode.empty() && o.mode != pf.mode)
        throw InputError("problem file declares mode '" + pf.mode + "', flag says '" + o.mode +
                         "'");
    if (pf.jets.empty()) throw InputError("problem has no jet components");

    int D = pf.jets.front().order();
    for (const auto& j : pf.jets)
        if (j.order() != D) throw InputError("jet components disagree on the order");
    if (o.order) {
        if (o.order > D)
            throw InputError("requested order " + std::to_string(o.order) +
                             " exceeds the stored jet order " + std::to_string(D));
        if (o.order < D) {
            for (auto& j : pf.jets) j = reduce_order(j, o.order);
            D = o.order;
        }
    }
    if (D < 2) throw InputError("jet order must be at least 2");

    ApproxConfig cfg;
    cfg.seed = o.seed;
    cfg.precision = o.precision;
    cfg.admission_tol = o.tol;
    cfg.tougeron_tol = o.tol * 1e-3;
    cfg.max_tries = o.max_tries;
    cfg.max_depth = o.max_depth;

    ApproxProblem P;
    P.nu_list = o.nu;
    ApproxResult res;
    std::vector<std::string> base_names;

    auto t0 = std::chrono::steady_clock::now();
    if (pf.mode == "variety") {
        P.variety = pf.variety;
        if (pf.declared_dim >= 0) P.variety.declared_dim = pf.declared_dim;
        P.solution_jet = pf.jets;
        P.config = cfg;
        res = approximate_into_variety(P);
        base_names = pf.variety.base_vars;
    } else {
        cfg.declared_dim = pf.declared_dim;
        res = approximate_solution(pf.Q, pf.jets, o.nu, cfg);
        P.variety.base_vars = pf.x_vars;
        P.variety.fiber_vars = pf.y_vars;
        P.variety.generators = pf.Q;
        P.variety.declared_dim = static_cast<int>(pf.x_vars.size());
        P.solution_jet = pf.jets;
        P.config = cfg;
        base_names = pf.x_vars;
    }
    double t_pipeline = elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    Report rep = verify_result(P, res);
    double t_verify = elapsed_ms(t0);

    ordered_json out;
    out["mode"] = pf.mode;
    out["order"] = D;
    out["nu"] = o.nu;
    out["seed"] = o.seed;
    out["precision"] = o.precision;
    out["result"] = result_to_json(res, base_names);
    out["report"] = report_to_json(rep);
    std::string payload = out.dump(2) + "\n";

    if (o.out.empty()) {
        std::fputs(payload.c_str(), stdout);
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw InputError("cannot write '" + o.out + "'");
        f << payload;
        std::fputs(render_report(rep).c_str(), stdout);
    }
    if (o.verbose) {
        std::fprintf(stderr, "pipeline %.1f ms, verification %.1f ms\n", t_pipeline, t_verify);
        for (const auto& line : res.trace) std::fprintf(stderr, "%s\n", line.c_str());
    }
    return rep.all_pass ? 0 : 2;
}

int cmd_describe(const std::string& path, int precision) {
    ProblemFile pf = problem_from_json(load_json(path), precision);
    std::printf("mode: %s\n", pf.mode.c_str());
    std::vector<std::string> names;
    if (pf.mode == "variety") {
        names = pf.variety.base_vars;
        names.insert(names.end(), pf.variety.fiber_vars.begin(), pf.variety.fiber_vars.end());
        std::printf("base:");
        for (const auto& v : pf.variety.base_vars) std::printf(" %s", v.c_str());
        std::printf("\nfiber:");
        for (const auto& v : pf.variety.fiber_vars) std::printf(" %s", v.c_str());
        std::printf("\ndeclared dimension: %d\n", pf.variety.declared_dim);
        std::printf("generators (%zu):\n", pf.variety.generators.size());
        for (const auto& g : pf.variety.generators)
            std::printf("  %s\n", to_text(g, names).c_str());
    } else {
        names = pf.x_vars;
        names.insert(names.end(), pf.y_vars.begin(), pf.y_vars.end());
        std::printf("source:");
        for (const auto& v : pf.x_vars) std::printf(" %s", v.c_str());
        std::printf("\ntarget:");
        for (const auto& v : pf.y_vars) std::printf(" %s", v.c_str());
        std::printf("\nequations (%zu):\n", pf.Q.size());
        for (const auto& g : pf.Q) std::printf("  %s\n", to_text(g, names).c_str());
    }
    int D = pf.jets.empty() ? 0 : pf.jets.front().order();
    std::printf("jet components: %zu, order %d\n", pf.jets.size(), D);

    std::vector<Jet> images;
    if (pf.mode == "theorem") {
        int n = static_cast<int>(pf.x_vars.size());
        for (int i = 0; i < n; ++i) images.push_back(Jet::coordinate(n, D, i));
    }
    images.insert(images.end(), pf.jets.begin(), pf.jets.end());
    const std::vector<MultiPoly>& gens =
        pf.mode == "variety" ? pf.variety.generators : pf.Q;
    Real residual = detail::residual_on(gens, images);
    std::printf("admission residual: %s\n", residual.to_decimal_string().c_str());
    return 0;
}

struct Check {
    std::string name;
    bool ok;
};

void suite_exact_poly(std::vector<Check>& checks) {
    std::vector<std::string> xtz = {"x", "t", "z"};
    MultiPoly r = resultant(parse_poly("t^2-x", xtz), parse_poly("(z-t)^2-(1+x)", xtz), 1);
    checks.push_back({"resultant of two square-root branches",
                      (r - parse_poly("z^4-2*(2*x+1)*z^2+1", xtz)).is_zero()});

    std::vector<std::string> abcz = {"a", "b", "c", "z"};
    MultiPoly quad = discriminant(UniOverPoly::from_multipoly(
        parse_poly("z^2+b*z+c", abcz), 3));
    checks.push_back(
        {"quadratic discriminant", (quad - parse_poly("b^2-4*c", abcz)).is_zero()});

    std::vector<std::string> pqz = {"p", "q", "z"};
    MultiPoly cub =
        discriminant(UniOverPoly::from_multipoly(parse_poly("z^3+p*z+q", pqz), 2));
    checks.push_back(
        {"depressed cubic discriminant", (cub - parse_poly("-4*p^3-27*q^2", pqz)).is_zero()});
}

void suite_weierstrass(std::vector<Check>& checks) {
    Jet u(2, 8);
    u.set_coeff(Exps{0, 1}, Complex::of(1.0, 0.0));
    u.set_coeff(Exps{2, 0}, Complex::of(1.0, 0.0));
    u.set_coeff(Exps{1, 2}, Complex::of(0.5, 0.0));
    WeierstrassFactor wf = weierstrass_prepare(u, 1);
    Jet recon = wf.unit * wf.w.to_jet(8);
    checks.push_back({"preparation identity",
                      Jet::max_abs_diff(u, recon, recon.valid()).cmp(1e-10) <= 0});
    checks.push_back({"prepared degree", wf.d == 1});

    Jet f = Jet::coordinate(2, 8, 1).pow(3) + Jet::coordinate(2, 8, 0);
    WeierstrassDivision dv = weierstrass_divide(f, wf.w, 2);
    Jet rhs = dv.quotient * wf.w.to_jet(8).pow(2) + dv.remainder.to_jet(8);
    checks.push_back(
        {"division identity", Jet::max_abs_diff(f, rhs, rhs.valid()).cmp(1e-10) <= 0});
    checks.push_back({"remainder degree bound", dv.remainder.degree() < 2});
}

void suite_tougeron(std::vector<Check>& checks) {
    int D = 8;
    Jet one_plus_x(1, D);
    one_plus_x.set_coeff(Exps{0}, Complex::of(1.0, 0.0));
    one_plus_x.set_coeff(Exps{1}, Complex::of(1.0, 0.0));
    ZPoly A;
    A.c.push_back(-one_plus_x);
    A.c.push_back(Jet(1, D));
    A.c.push_back(Jet::constant(1, D, Complex::of(1.0, 0.0)));

    Jet alpha(1, D);
    alpha.set_coeff(Exps{0}, Complex::of(1.0, 0.0));
    alpha.set_coeff(Exps{1}, Complex::of(0.5, 0.0));
    Jet defect = A.eval(alpha);
    Jet dA = A.derivative().eval(alpha);
    Jet c = defect * dA.invert_unit().pow(2);

    TougeronOutcome out = tougeron_correct(A, alpha, c);
    Jet res = A.eval(out.b);
    checks.push_back(
        {"corrected root", res.max_abs_coeff(res.valid()).cmp(1e-10) <= 0});
    checks.push_back({"distance bound", out.bound_lhs.cmp(out.bound_rhs) <= 0});
}

void suite_elimination(std::vector<Check>& checks) {
    std::vector<std::string> tuv = {"t", "u", "v"};
    std::vector<MultiPoly> gens = {parse_poly("u-t^2", tuv), parse_poly("v-t^3", tuv)};
    IdealBasis blockb = groebner_basis(gens, MonomialOrder::elim_block(3, {0}));
    IdealBasis elim = eliminate(blockb, {0});
    bool ok = elim.gens.size() == 1 && (elim.gens[0] - parse_poly("u^3-v^2", tuv)).is_zero();
    checks.push_back({"cuspidal curve eliminant", ok});

    VarietySpec V;
    V.base_vars = {"y"};
    V.fiber_vars = {"v"};
    V.declared_dim = 1;
    V.generators = {parse_poly("v^2-y-1", {"y", "v"})};
    UniOverPoly P = optimal_polynomial(V, {GaussRat(1)});
    std::vector<std::string> yz = {"y", "z"};
    checks.push_back({"optimal polynomial of a hyperbola section",
                      (P.to_multipoly() - parse_poly("z^2-y-1", yz)).is_zero()});
}

int cmd_selftest(const std::string& filter) {
    struct Suite {
        std::string name;
        std::function<void(std::vector<Check>&)> fn;
    };
    std::vector<Suite> suites = {{"exact-poly", suite_exact_poly},
                                 {"weierstrass", suite_weierstrass},
                                 {"tougeron", suite_tougeron},
                                 {"elimination", suite_elimination}};
    int ran = 0, failed = 0;
    for (const auto& s : suites) {
        if (!filter.empty() && s.name.find(filter) == std::string::npos) continue;
        std::vector<Check> checks;
        try {
            s.fn(checks);
        } catch (const Error& e) {
            checks.push_back({std::string("unexpected error: ") + e.what(), false});
        }
        for (const auto& c : checks) {
            ++ran;
            if (!c.ok) ++failed;
            std::printf("%s  [%s] %s\n", c.ok ? "ok  " : "FAIL", s.name.c_str(),
                        c.name.c_str());
        }
    }
    if (!ran) {
        std::fprintf(stderr, "no suite matches '%s'\n", filter.c_str());
        return 2;
    }
    std::printf("%d checks, %d failures\n", ran, failed);
    return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomial approximation of holomorphic solutions on algebraic varieties"};
    app.require_subcommand(1);

    RunOptions ro;
    CLI::App* run = app.add_subcommand("run", "approximate, verify, and emit a report");
    run->add_option("--problem", ro.problem, "problem JSON file")->required();
    run->add_option("--order", ro.order, "truncate input jets to this order");
    run->add_option("--nu", ro.nu, "ascending truncation degrees")
        ->required()
        ->delimiter(',');
    run->add_option("--seed", ro.seed, "seed for randomized choices");
    run->add_option("--precision", ro.precision, "working precision in bits");
    run->add_option("--tol", ro.tol, "admission tolerance");
    run->add_option("--max-tries", ro.max_tries, "attempts per randomized choice");
    run->add_option("--max-depth", ro.max_depth, "recursion depth limit");
    run->add_option("--out", ro.out, "write the combined result/report JSON here");
    run->add_option("--mode", ro.mode, "expected problem mode (theorem|variety)")
        ->check(CLI::IsMember({"theorem", "variety"}));
    run->add_flag("--verbose", ro.verbose, "print timings and the pipeline trace to stderr");

    std::string filter;
    CLI::App* selftest = app.add_subcommand("selftest", "run the bundled property suites");
    selftest->add_option("--filter", filter, "only run suites whose name contains this");

    std::string describe_path;
    int describe_precision = 128;
    CLI::App* describe = app.add_subcommand("describe", "summarize a problem file");
    describe->add_option("--problem", describe_path, "problem JSON file")->required();
    describe->add_option("--precision", describe_precision, "working precision in bits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    try {
        if (run->parsed()) return cmd_run(ro);
        if (selftest->parsed()) return cmd_selftest(filter);
        return cmd_describe(describe_path, describe_precision);
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 4;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 4;
    } catch (const PipelineError& e) {
        std::fprintf(stderr, "pipeline error: %s\n", e.what());
        return 3;
    } catch (const InternalError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
}
