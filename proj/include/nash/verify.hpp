#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "nash/approx.hpp"

namespace nash {

/// One verified row per requested truncation degree.  Residuals and distances
/// are recomputed here from the output jets and annihilators; the key-identity
/// residual and the correction bound margin are carried over from the run,
/// since the intermediate jets they refer to are not part of the result.
struct VerifyRow {
    int nu = 0;
    Real variety_residual;
    Real annihilator_residual;
    Real key_residual;
    Real correction_margin;
    Real distance;
    Real polydisc_error;
    std::vector<int> degrees;
    bool variety_ok = false;
    bool annihilator_ok = false;
};

struct Report {
    int order = 0;
    double tolerance = 0.0;
    double radius = 0.0;
    std::vector<VerifyRow> rows;
    bool variety_pass = false;
    bool annihilator_pass = false;
    bool convergence_pass = false;
    bool degree_pass = false;
    bool all_pass = false;
};

struct ConvergenceRow {
    int nu = 0;
    std::vector<Real> component_error;
    Real polydisc_error;
};

namespace detail {

/// Sup bound of a jet on the closed polydisc of the given radius: the sum of
/// coefficient moduli weighted by radius^(total degree).
inline Real polydisc_norm(const Jet& u, double radius) {
    Real total(u.prec());
    Real r = Real::of(radius, u.prec());
    for (const auto& [e, c] : u.terms()) {
        int deg = 0;
        for (int k : e) deg += k;
        if (deg > u.valid()) continue;
        Real w = c.abs();
        for (int i = 0; i < deg; ++i) w = w * r;
        total = total + w;
    }
    return total;
}

/// Outputs of a graph-style run cover only the fiber components; prepend the
/// source coordinates so variety generators can be evaluated uniformly.
inline std::vector<Jet> full_images(const ApproxProblem& problem, const NuResult& nr) {
    size_t total = problem.variety.base_vars.size() + problem.variety.fiber_vars.size();
    std::vector<Jet> images;
    if (nr.components.size() == total) {
        for (const auto& c : nr.components) images.push_back(c.jet);
        return images;
    }
    const Jet& model = nr.components.front().jet;
    int n = static_cast<int>(total - nr.components.size());
    for (int i = 0; i < n; ++i)
        images.push_back(Jet::coordinate(model.nvars(), model.order(), i, model.prec(),
                                         model.hard_zero()));
    for (const auto& c : nr.components) images.push_back(c.jet);
    return images;
}

}  // namespace detail

inline std::vector<ConvergenceRow> convergence_table(const ApproxResult& result,
                                                     const std::vector<Jet>& reference,
                                                     double radius = 0.5) {
    std::vector<ConvergenceRow> table;
    for (const auto& nr : result.per_nu) {
        if (nr.components.size() != reference.size())
            throw InputError("convergence_table: reference has " +
                             std::to_string(reference.size()) + " components, result has " +
                             std::to_string(nr.components.size()));
        ConvergenceRow row;
        row.nu = nr.nu;
        row.polydisc_error = Real(reference.front().prec());
        for (size_t i = 0; i < reference.size(); ++i) {
            const Jet& out = nr.components[i].jet;
            if (out.nvars() != reference[i].nvars())
                throw InputError("convergence_table: component " + std::to_string(i + 1) +
                                 " lives in a different variable count");
            int upto = std::min(out.valid(), reference[i].valid());
            row.component_error.push_back(Jet::max_abs_diff(out, reference[i], upto));
            Jet diff = out - reference[i];
            row.polydisc_error = max(row.polydisc_error, detail::polydisc_norm(diff, radius));
        }
        table.push_back(std::move(row));
    }
    return table;
}

inline Report verify_result(const ApproxProblem& problem, const ApproxResult& result,
                            double radius = 0.5) {
    Report rep;
    rep.order = result.order;
    rep.tolerance = problem.config.admission_tol;
    rep.radius = radius;

    std::vector<ConvergenceRow> table = convergence_table(result, problem.solution_jet, radius);

    for (size_t k = 0; k < result.per_nu.size(); ++k) {
        const NuResult& nr = result.per_nu[k];
        VerifyRow row;
        row.nu = nr.nu;

        std::vector<Jet> images = detail::full_images(problem, nr);
        row.variety_residual = detail::residual_on(problem.variety.generators, images);

        Real worst(images.front().prec());
        for (const auto& c : nr.components) {
            worst = max(worst, detail::annihilator_defect(c.annihilator, c.jet));
            row.degrees.push_back(c.annihilator.degree());
        }
        row.annihilator_residual = worst;

        row.key_residual = nr.key_residual;
        row.correction_margin = nr.correction_bound - nr.correction_size;
        row.distance = Real(images.front().prec());
        for (const auto& e : table[k].component_error) row.distance = max(row.distance, e);
        row.polydisc_error = table[k].polydisc_error;

        row.variety_ok = row.variety_residual.cmp(rep.tolerance) <= 0;
        row.annihilator_ok = row.annihilator_residual.cmp(rep.tolerance) <= 0;
        rep.rows.push_back(std::move(row));
    }

    rep.variety_pass = true;
    rep.annihilator_pass = true;
    rep.convergence_pass = true;
    rep.degree_pass = true;
    for (size_t k = 0; k < rep.rows.size(); ++k) {
        rep.variety_pass = rep.variety_pass && rep.rows[k].variety_ok;
        rep.annihilator_pass = rep.annihilator_pass && rep.rows[k].annihilator_ok;
        if (k) {
            Real slack = rep.rows[k].distance - rep.rows[k - 1].distance;
            if (slack.cmp(rep.tolerance) > 0) rep.convergence_pass = false;
            if (rep.rows[k].degrees != rep.rows[0].degrees) rep.degree_pass = false;
        }
    }
    rep.all_pass =
        rep.variety_pass && rep.annihilator_pass && rep.convergence_pass && rep.degree_pass;
    return rep;
}

inline std::string render_report(const Report& rep) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "order %d, tolerance %.3g, polydisc radius %.3g\n",
                  rep.order, rep.tolerance, rep.radius);
    out += line;
    out += "  nu   variety      annihilator  distance     polydisc     degrees\n";
    for (const auto& row : rep.rows) {
        std::string degs;
        for (size_t i = 0; i < row.degrees.size(); ++i) {
            if (i) degs += ",";
            degs += std::to_string(row.degrees[i]);
        }
        std::snprintf(line, sizeof line, "%4d   %-10.3e   %-10.3e   %-10.3e   %-10.3e   %s\n",
                      row.nu, row.variety_residual.to_double(),
                      row.annihilator_residual.to_double(), row.distance.to_double(),
                      row.polydisc_error.to_double(), degs.c_str());
        out += line;
    }
    out += std::string("variety ") + (rep.variety_pass ? "pass" : "FAIL");
    out += std::string(", annihilators ") + (rep.annihilator_pass ? "pass" : "FAIL");
    out += std::string(", convergence ") + (rep.convergence_pass ? "pass" : "FAIL");
    out += std::string(", degrees ") + (rep.degree_pass ? "pass" : "FAIL");
    out += std::string(" -> ") + (rep.all_pass ? "PASS" : "FAIL") + "\n";
    return out;
}

}  // namespace nash
