#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nash/errors.hpp"
#include "nash/jet.hpp"
#include "nash/rng.hpp"

namespace nash {

struct TougeronConfig {
    double tol = 1e-12;            // fixed-point step tolerance
    double hypothesis_tol = 1e-9;  // allowed defect in A(alpha) = c * (A'(alpha))^2
    int max_iter = 64;
    double radius = 0.5;  // polydisc radius for the a-posteriori bound
    int sample_points = 100;
    std::uint64_t seed = 1;
};

struct TougeronOutcome {
    Jet b;    // corrected branch, a root of A to working accuracy
    Jet eps;  // b = alpha + eps * A'(alpha)
    int iterations = 0;
    Real defect_before;  // max coeff of A(alpha) up to the valid order
    Real defect_after;   // same for A(b)
    Real bound_lhs;      // sampled sup |b - alpha| on the polydisc
    Real bound_rhs;      // sampled 2 * sup |c * A'(alpha)|
};

/// Given a one-variable polynomial A with jet coefficients, a candidate
/// alpha and a small multiplier c with A(alpha) = c * (A'(alpha))^2, finds
/// b = alpha + eps * A'(alpha) with A(b) = 0 to working accuracy. The
/// correction eps solves eps = -c - sum_{k>=2} q_k eps^k with
/// q_k = A^(k)(alpha)/k! * (A'(alpha))^(k-2), iterated from eps = -c.
inline TougeronOutcome tougeron_correct(const ZPoly& A, const Jet& alpha, const Jet& c,
                                        const TougeronConfig& cfg = {}) {
    int order = alpha.order();
    mpfr_prec_t prec = alpha.prec();

    ZPoly dA = A.derivative();
    if (dA.c.empty()) throw PreconditionError("tougeron_correct: constant polynomial");
    Jet u = dA.eval(alpha);
    Jet a0 = A.eval(alpha);

    Real defect_before = a0.max_abs_coeff(std::min(a0.valid(), c.valid()));

    Jet uu = u * u;
    Real hyp = Jet::max_abs_diff(a0, c * uu, std::min(a0.valid(), c.valid()));
    if (hyp.cmp(cfg.hypothesis_tol) > 0)
        throw PipelineError("tougeron_correct: hypothesis A(alpha) = c*A'(alpha)^2 fails (defect " +
                            hyp.to_decimal_string() + ")");

    // q_k = A^(k)(alpha) / k! * u^(k-2) for k = 2..deg(A).
    std::vector<Jet> q;
    {
        ZPoly der = dA;
        Real fact = Real::of_long(1, prec);
        Jet upow = Jet::constant(alpha.nvars(), order, Complex::of(1.0, 0.0, prec), prec,
                                 alpha.hard_zero());
        for (int k = 2; k <= A.degree(); ++k) {
            der = der.derivative();
            if (der.c.empty()) break;
            fact *= Real::of_long(k, prec);
            Jet qk = der.eval(alpha).scale(Complex(Real::of_long(1, prec) / fact, Real(prec)));
            if (k > 2) upow *= u;
            q.push_back(qk * upow);
        }
    }

    Jet eps = -c;
    Real cap = c.max_abs_coeff(order) * Real::of(1e8, prec) + Real::of(1e8, prec);
    bool converged = false;
    int iterations = 0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        // next = -c - eps^2 * (q_2 + eps*(q_3 + ...)).
        Jet next = -c;
        if (!q.empty()) {
            Jet horner = q.back();
            for (int k = static_cast<int>(q.size()) - 2; k >= 0; --k)
                horner = horner * eps + q[static_cast<size_t>(k)];
            next = next - horner * eps * eps;
        }
        Real step = Jet::max_abs_diff(next, eps, order);
        eps = next;
        iterations = it + 1;
        if (step.cmp(cfg.tol) <= 0) {
            converged = true;
            break;
        }
        if (eps.max_abs_coeff(order) > cap)
            throw ContractionError("tougeron_correct: correction diverged after " +
                                   std::to_string(it + 1) + " iterations");
    }
    if (!converged)
        throw ContractionError("tougeron_correct: no contraction within " +
                               std::to_string(cfg.max_iter) + " iterations");

    Jet b = alpha + eps * u;
    Real defect_after = A.eval(b).max_abs_coeff(b.valid());

    // Sampled a-posteriori check of sup|b - alpha| <= 2 sup|c * A'(alpha)|
    // on the polydisc of the configured radius.
    Rng rng(cfg.seed);
    Jet diff = b - alpha;
    Jet cu = c * u;
    Real lhs(prec), rhs(prec);
    for (int s = 0; s < cfg.sample_points; ++s) {
        std::vector<Complex> pt;
        pt.reserve(static_cast<size_t>(alpha.nvars()));
        for (int i = 0; i < alpha.nvars(); ++i) {
            double theta = 6.283185307179586 * rng.unit();
            pt.push_back(Complex::of(cfg.radius * std::cos(theta),
                                     cfg.radius * std::sin(theta), prec));
        }
        Real dv = diff.eval(pt).abs();
        Real cv = cu.eval(pt).abs();
        if (dv > lhs) lhs = dv;
        if (cv > rhs) rhs = cv;
    }
    return TougeronOutcome{std::move(b), std::move(eps), iterations,
                           defect_before, defect_after,
                           std::move(lhs), Real::of(2.0, prec) * rhs};
}

}  // namespace nash
