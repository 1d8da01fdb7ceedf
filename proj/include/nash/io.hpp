#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nash/approx.hpp"
#include "nash/poly_text.hpp"
#include "nash/verify.hpp"

namespace nash {

using ordered_json = nlohmann::ordered_json;

/// A problem file: either a variety with a full solution jet, or a polynomial
/// system Q(x, y) together with the jet of a map y = f(x) whose graph solves it.
struct ProblemFile {
    std::string mode;
    std::vector<std::string> x_vars;
    std::vector<std::string> y_vars;
    std::vector<MultiPoly> Q;
    VarietySpec variety;
    std::vector<Jet> jets;
    int declared_dim = -1;
};

namespace detail {

inline std::string decimal(const Real& r) { return r.to_decimal_string(); }

inline std::string decimal(double x, mpfr_prec_t prec = 128) {
    return Real::of(x, prec).to_decimal_string();
}

inline const ordered_json& field(const ordered_json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError("missing field '" + key + "'");
    return *it;
}

}  // namespace detail

inline ordered_json jet_to_json(const Jet& u) {
    ordered_json j;
    j["nvars"] = u.nvars();
    j["order"] = u.order();
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : u.terms()) {
        int deg = 0;
        for (int k : e) deg += k;
        if (deg > u.valid() || c.is_zero()) continue;
        ordered_json term;
        term["exp"] = e;
        term["re"] = detail::decimal(c.re());
        term["im"] = detail::decimal(c.im());
        terms.push_back(std::move(term));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline Jet jet_from_json(const ordered_json& j, mpfr_prec_t prec = 128,
                         double hard_zero = 1e-30) {
    if (!j.is_object()) throw InputError("jet: expected an object");
    int nvars = detail::field(j, "nvars").get<int>();
    int order = detail::field(j, "order").get<int>();
    if (nvars < 0 || order < 0) throw InputError("jet: nvars and order must be nonnegative");
    Jet u(nvars, order, prec, hard_zero);
    for (const auto& term : detail::field(j, "terms")) {
        Exps e = detail::field(term, "exp").get<Exps>();
        if (static_cast<int>(e.size()) != nvars)
            throw InputError("jet: exponent tuple length does not match nvars");
        int deg = 0;
        for (int k : e) {
            if (k < 0) throw InputError("jet: negative exponent");
            deg += k;
        }
        if (deg > order) throw InputError("jet: term exceeds the stated order");
        Real re = Real::of_string(detail::field(term, "re").get<std::string>(), prec);
        Real im = Real::of_string(detail::field(term, "im").get<std::string>(), prec);
        u.set_coeff(e, Complex(std::move(re), std::move(im)));
    }
    return u;
}

inline ordered_json variety_to_json(const VarietySpec& V) {
    ordered_json j;
    j["base_vars"] = V.base_vars;
    j["fiber_vars"] = V.fiber_vars;
    j["declared_dim"] = V.declared_dim;
    std::vector<std::string> names = V.base_vars;
    names.insert(names.end(), V.fiber_vars.begin(), V.fiber_vars.end());
    ordered_json gens = ordered_json::array();
    for (const auto& g : V.generators) gens.push_back(to_text(g, names));
    j["generators"] = std::move(gens);
    return j;
}

inline VarietySpec variety_from_json(const ordered_json& j) {
    if (!j.is_object()) throw InputError("variety: expected an object");
    VarietySpec V;
    V.base_vars = detail::field(j, "base_vars").get<std::vector<std::string>>();
    V.fiber_vars = detail::field(j, "fiber_vars").get<std::vector<std::string>>();
    V.declared_dim = detail::field(j, "declared_dim").get<int>();
    std::vector<std::string> names = V.base_vars;
    names.insert(names.end(), V.fiber_vars.begin(), V.fiber_vars.end());
    for (const auto& g : detail::field(j, "generators")) {
        if (!g.is_string()) throw InputError("variety: generators must be polynomial text");
        V.generators.push_back(parse_poly(g.get<std::string>(), names));
    }
    return V;
}

inline ordered_json problem_to_json(const ProblemFile& pf) {
    ordered_json j;
    j["mode"] = pf.mode;
    std::vector<std::string> jet_names;
    if (pf.mode == "variety") {
        j["Q"] = variety_to_json(pf.variety);
        jet_names = pf.variety.base_vars;
        jet_names.insert(jet_names.end(), pf.variety.fiber_vars.begin(),
                         pf.variety.fiber_vars.end());
    } else {
        j["x_vars"] = pf.x_vars;
        j["y_vars"] = pf.y_vars;
        std::vector<std::string> names = pf.x_vars;
        names.insert(names.end(), pf.y_vars.begin(), pf.y_vars.end());
        ordered_json gens = ordered_json::array();
        for (const auto& g : pf.Q) gens.push_back(to_text(g, names));
        j["Q"] = std::move(gens);
        jet_names = pf.y_vars;
    }
    ordered_json jets;
    for (size_t i = 0; i < pf.jets.size(); ++i) jets[jet_names.at(i)] = jet_to_json(pf.jets[i]);
    j["jet"] = std::move(jets);
    if (pf.declared_dim >= 0) j["declared_dim"] = pf.declared_dim;
    return j;
}

inline ProblemFile problem_from_json(const ordered_json& j, mpfr_prec_t prec = 128,
                                     double hard_zero = 1e-30) {
    if (!j.is_object()) throw InputError("problem: expected an object");
    ProblemFile pf;
    pf.mode = detail::field(j, "mode").get<std::string>();
    std::vector<std::string> jet_names;
    if (pf.mode == "variety") {
        pf.variety = variety_from_json(detail::field(j, "Q"));
        jet_names = pf.variety.base_vars;
        jet_names.insert(jet_names.end(), pf.variety.fiber_vars.begin(),
                         pf.variety.fiber_vars.end());
    } else if (pf.mode == "theorem") {
        pf.x_vars = detail::field(j, "x_vars").get<std::vector<std::string>>();
        pf.y_vars = detail::field(j, "y_vars").get<std::vector<std::string>>();
        if (pf.x_vars.empty() || pf.y_vars.empty())
            throw InputError("problem: x_vars and y_vars must be nonempty");
        std::vector<std::string> names = pf.x_vars;
        names.insert(names.end(), pf.y_vars.begin(), pf.y_vars.end());
        for (const auto& g : detail::field(j, "Q")) {
            if (!g.is_string()) throw InputError("problem: Q must hold polynomial text");
            pf.Q.push_back(parse_poly(g.get<std::string>(), names));
        }
        jet_names = pf.y_vars;
    } else {
        throw InputError("problem: mode must be 'theorem' or 'variety'");
    }
    const ordered_json& jets = detail::field(j, "jet");
    if (!jets.is_object()) throw InputError("problem: 'jet' must map component names to jets");
    for (const auto& name : jet_names) {
        auto it = jets.find(name);
        if (it == jets.end()) throw InputError("problem: missing jet for component '" + name + "'");
        pf.jets.push_back(jet_from_json(*it, prec, hard_zero));
    }
    if (j.contains("declared_dim")) pf.declared_dim = j["declared_dim"].get<int>();
    return pf;
}

inline ordered_json change_to_json(const ChangeRecord& ch) {
    ordered_json j;
    j["scope"] = ch.scope;
    j["seed"] = ch.seed_used;
    j["attempts"] = ch.attempts;
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < ch.matrix.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < ch.matrix.cols(); ++c) row.push_back(ch.matrix.at(r, c).get_str());
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j;
}

inline ordered_json result_to_json(const ApproxResult& result,
                                   const std::vector<std::string>& base_names) {
    ordered_json j;
    j["order"] = result.order;
    j["degree_stable"] = result.degree_stable;
    std::vector<std::string> anni_names = base_names;
    anni_names.push_back("z");
    ordered_json per_nu = ordered_json::array();
    for (const auto& nr : result.per_nu) {
        ordered_json entry;
        entry["nu"] = nr.nu;
        ordered_json comps = ordered_json::array();
        for (const auto& c : nr.components) {
            ordered_json comp;
            comp["jet"] = jet_to_json(c.jet);
            comp["annihilator"] = to_text(c.annihilator.to_multipoly(), anni_names);
            comp["degree"] = c.annihilator.degree();
            comp["valid_order"] = c.valid_order;
            comps.push_back(std::move(comp));
        }
        entry["components"] = std::move(comps);
        ordered_json diag;
        diag["key_residual"] = detail::decimal(nr.key_residual);
        diag["correction_size"] = detail::decimal(nr.correction_size);
        diag["correction_bound"] = detail::decimal(nr.correction_bound);
        diag["lift_residual"] = detail::decimal(nr.lift_residual);
        diag["variety_residual"] = detail::decimal(nr.variety_residual);
        diag["annihilator_residual"] = detail::decimal(nr.annihilator_residual);
        diag["distance"] = detail::decimal(nr.distance);
        entry["diagnostics"] = std::move(diag);
        per_nu.push_back(std::move(entry));
    }
    j["per_nu"] = std::move(per_nu);
    ordered_json changes = ordered_json::array();
    for (const auto& ch : result.changes) changes.push_back(change_to_json(ch));
    j["changes"] = std::move(changes);
    j["trace"] = result.trace;
    return j;
}

inline ordered_json report_to_json(const Report& rep) {
    ordered_json j;
    j["order"] = rep.order;
    j["tolerance"] = detail::decimal(rep.tolerance);
    j["radius"] = detail::decimal(rep.radius);
    ordered_json rows = ordered_json::array();
    for (const auto& row : rep.rows) {
        ordered_json r;
        r["nu"] = row.nu;
        r["variety_residual"] = detail::decimal(row.variety_residual);
        r["annihilator_residual"] = detail::decimal(row.annihilator_residual);
        r["key_residual"] = detail::decimal(row.key_residual);
        r["correction_margin"] = detail::decimal(row.correction_margin);
        r["distance"] = detail::decimal(row.distance);
        r["polydisc_error"] = detail::decimal(row.polydisc_error);
        r["degrees"] = row.degrees;
        r["variety_ok"] = row.variety_ok;
        r["annihilator_ok"] = row.annihilator_ok;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    ordered_json verdicts;
    verdicts["variety"] = rep.variety_pass;
    verdicts["annihilators"] = rep.annihilator_pass;
    verdicts["convergence"] = rep.convergence_pass;
    verdicts["degree_stability"] = rep.degree_pass;
    verdicts["all"] = rep.all_pass;
    j["verdicts"] = std::move(verdicts);
    return j;
}

}  // namespace nash
