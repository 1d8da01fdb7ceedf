// Feeds the order-8 Taylor jet of the branch v = sqrt(1+y) into the
// parabola v^2 = 1 + y. The branch is already algebraic, so the pipeline
// reproduces it exactly at every truncation degree and recovers the
// defining polynomial z^2 - y - 1 as its witness.

#include <cstdio>

#include <gmpxx.h>

#include <vector>

#include "nash/approx.hpp"
#include "nash/poly_text.hpp"
#include "nash/verify.hpp"

using namespace nash;

namespace {

Jet series(int order, const std::vector<mpq_class>& coeffs) {
    Jet j(1, order);
    for (int k = 0; k < static_cast<int>(coeffs.size()) && k <= order; ++k)
        j.set_coeff(Exps{k}, Complex::of_rat(GaussRat(coeffs[k])));
    return j;
}

}  // namespace

int main() {
    const int order = 8;

    // Taylor coefficients of sqrt(1+t): c_k = c_{k-1} * (3 - 2k) / (2k).
    std::vector<mpq_class> root(order + 1);
    root[0] = 1;
    for (int k = 1; k <= order; ++k)
        root[k] = root[k - 1] * mpq_class(3 - 2 * k) / mpq_class(2 * k);
    std::vector<mpq_class> ident(order + 1);
    ident[1] = 1;

    ApproxProblem P;
    P.variety.base_vars = {"y"};
    P.variety.fiber_vars = {"v"};
    P.variety.declared_dim = 1;
    P.variety.generators = {parse_poly("v^2-y-1", {"y", "v"})};
    P.solution_jet = {series(order, ident), series(order, root)};
    P.nu_list = {1, 2, 3, 4};

    ApproxResult res = approximate_into_variety(P);

    std::printf("witness polynomials at nu=%d:\n", res.per_nu.back().nu);
    for (const NashFunction& nf : res.per_nu.back().components)
        std::printf("  %s\n",
                    to_text(nf.annihilator.to_multipoly(), {"y", "z"}).c_str());

    std::printf("\n%-4s  %-14s  %-14s  %-14s\n", "nu", "variety", "witness", "distance");
    for (const NuResult& nr : res.per_nu)
        std::printf("%-4d  %-14.3e  %-14.3e  %-14.3e\n", nr.nu,
                    nr.variety_residual.to_double(), nr.annihilator_residual.to_double(),
                    nr.distance.to_double());

    Report rep = verify_result(P, res);
    std::printf("\n%s", render_report(rep).c_str());
    return rep.all_pass ? 0 : 1;
}
