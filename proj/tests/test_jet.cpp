#include <catch2/catch_amalgamated.hpp>

#include "nash/jet.hpp"
#include "nash/newton.hpp"
#include "nash/poly_text.hpp"
#include "nash/rng.hpp"
#include "nash/tougeron.hpp"
#include "nash/weierstrass.hpp"

using namespace nash;

namespace {

constexpr int kOrder = 8;

/// Jet of sum_k num(k)/den(k) * x^k in a one-variable ring.
Jet series1(int order, const std::vector<mpq_class>& coeffs) {
    MultiPoly p(1);
    for (size_t k = 0; k < coeffs.size(); ++k)
        p.add_term({static_cast<int>(k)}, GaussRat(coeffs[k]));
    return Jet::from_poly(p, order, 128);
}

mpq_class factorial(int k) {
    mpq_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

Jet exp_jet(int order, int sign = 1) {
    std::vector<mpq_class> c;
    for (int k = 0; k <= order; ++k) {
        mpq_class v = (sign < 0 && k % 2) ? mpq_class(-1) : mpq_class(1);
        c.push_back(v / factorial(k));
    }
    return series1(order, c);
}

Jet random_jet(Rng& rng, int nvars, int order, bool unit_constant) {
    Jet j(nvars, order, 128);
    for (const Exps& e : all_exponents(nvars, order)) {
        if (rng.below(3) == 0) continue;
        double re = static_cast<double>(rng.int_in(-8, 8)) / 4.0;
        double im = rng.below(4) == 0 ? static_cast<double>(rng.int_in(-4, 4)) / 4.0 : 0.0;
        j.set_coeff(e, Complex::of(re, im));
    }
    if (unit_constant) j.set_coeff(Exps(static_cast<size_t>(nvars), 0), Complex::of(1.0, 0.0));
    return j;
}

double maxc(const Jet& j, int upto) { return j.max_abs_coeff(upto).to_double(); }

}  // namespace

TEST_CASE("jet ring operations") {
    Rng rng(11);
    for (int t = 0; t < 8; ++t) {
        Jet a = random_jet(rng, 2, kOrder, false);
        Jet b = random_jet(rng, 2, kOrder, false);
        Jet c = random_jet(rng, 2, kOrder, false);
        CHECK(maxc((a + b) - b - a, kOrder) < 1e-30);
        CHECK(maxc(a * b - b * a, kOrder) < 1e-30);
        CHECK(maxc(a * (b + c) - a * b - a * c, kOrder) < 1e-25);
        CHECK(maxc((a * b) * c - a * (b * c), kOrder) < 1e-25);
    }
}

TEST_CASE("jet truncation and validity") {
    Jet e = exp_jet(kOrder);
    CHECK(e.valid() == kOrder);
    Jet t3 = e.truncate(3);
    CHECK(t3.valid() == kOrder);  // a truncation is exact as its own object
    CHECK(t3.coeff({3}).re().to_double() == Catch::Approx(1.0 / 6.0));
    CHECK(t3.coeff({4}).is_zero());

    Jet prod = e * e;
    CHECK(prod.valid() == kOrder);
    e.set_valid(5);
    Jet prod2 = e * exp_jet(kOrder);
    CHECK(prod2.valid() == 5);
    CHECK(e.derivative(0).valid() == 4);
}

TEST_CASE("hard zero threshold drops noise") {
    Jet j(1, 4, 128, 1e-30);
    j.set_coeff({1}, Complex::of(1e-31, 0.0));
    CHECK(j.stored_zero());
    j.set_coeff({1}, Complex::of(1e-29, 0.0));
    CHECK(!j.stored_zero());
}

TEST_CASE("jet inversion") {
    // 1/(1 - x) is the geometric series.
    MultiPoly p = parse_poly("1-t", {"t"});
    Jet g = Jet::from_poly(p, kOrder).invert_unit();
    for (int k = 0; k <= kOrder; ++k)
        CHECK(g.coeff({k}).re().to_double() == Catch::Approx(1.0));

    Jet e = exp_jet(kOrder);
    CHECK(maxc(e * e.invert_unit() -
                   Jet::constant(1, kOrder, Complex::of(1.0, 0.0)),
               kOrder) < 1e-30);

    CHECK_THROWS_AS(Jet::coordinate(1, kOrder, 0).invert_unit(), PreconditionError);
}

TEST_CASE("jet composition and evaluation") {
    // exp(x)*exp(-x) = 1 as truncated series.
    Jet one = exp_jet(kOrder) * exp_jet(kOrder, -1);
    CHECK(maxc(one - Jet::constant(1, kOrder, Complex::of(1.0, 0.0)), kOrder) < 1e-25);

    // exp composed with 2x against the direct series of exp(2x).
    Jet inner = Jet::coordinate(1, kOrder, 0).scale(Complex::of(2.0, 0.0));
    Jet composed = exp_jet(kOrder).compose({inner});
    std::vector<mpq_class> twoexp;
    mpq_class pw = 1;
    for (int k = 0; k <= kOrder; ++k) {
        twoexp.push_back(pw / factorial(k));
        pw *= 2;
    }
    CHECK(maxc(composed - series1(kOrder, twoexp), kOrder) < 1e-25);

    Complex v = exp_jet(kOrder).eval({Complex::of(0.1, 0.0)});
    CHECK(v.re().to_double() == Catch::Approx(std::exp(0.1)).epsilon(1e-9));
}

TEST_CASE("jet dyadic rationalization is exact") {
    Rng rng(5);
    Jet a = random_jet(rng, 2, 5, false);
    MultiPoly p = a.to_poly_dyadic();
    Jet back = Jet::from_poly(p, 5, 128);
    CHECK(maxc(a - back, 5) == 0.0);
}

TEST_CASE("regular order along the distinguished axis") {
    // x1 * x2 restricted to the x2 axis vanishes: not regular.
    Jet j = Jet::from_poly(parse_poly("x*y", {"x", "y"}), kOrder);
    CHECK(!xn_regular_order_opt(j, 1).has_value());
    CHECK_THROWS_AS(xn_regular_order(j, 1), PreconditionError);

    Jet u = Jet::from_poly(parse_poly("y^2+x*y+x^3*y^3", {"x", "y"}), kOrder);
    CHECK(xn_regular_order(u, 1) == 2);  // mixed terms do not count: axis terms only
    Jet w = Jet::from_poly(parse_poly("y^3+x*y", {"x", "y"}), kOrder);
    CHECK(xn_regular_order(w, 1) == 3);
}

TEST_CASE("weierstrass preparation recovers the factors") {
    // u = unit * W with W = y^2 + x*y - x (monic, distinguished variable y).
    std::vector<std::string> xy = {"x", "y"};
    MultiPoly wpoly = parse_poly("y^2+x*y-x", xy);
    MultiPoly upoly = parse_poly("1+x+y+x*y^2", xy);  // a unit at the origin
    Jet u = Jet::from_poly(wpoly * upoly, kOrder);

    WeierstrassFactor wf = weierstrass_prepare(u, 1);
    CHECK(wf.d == 2);
    CHECK(wf.w.is_monic());

    // The factors of an in-range polynomial are recovered exactly: W has
    // coefficients x and -x, the unit matches the true cofactor.
    CHECK(maxc(wf.w.coeffs[1] - Jet::from_poly(parse_poly("x", {"x"}), kOrder), kOrder) < 1e-25);
    CHECK(maxc(wf.w.coeffs[2] - Jet::from_poly(parse_poly("-x", {"x"}), kOrder), kOrder) < 1e-25);
    Jet cof = Jet::from_poly(upoly, kOrder);
    CHECK(maxc(wf.unit - cof, kOrder) < 1e-25);

    // unit * W reproduces u on all stored coefficients.
    Jet recon = wf.unit * wf.w.to_jet(kOrder);
    CHECK(maxc(recon - u, kOrder) < 1e-25);
    CHECK(wf.unit.valid() == kOrder / 2 - 1);
}

TEST_CASE("weierstrass preparation on random regular series") {
    Rng rng(31337);
    for (int t = 0; t < 10; ++t) {
        int d = static_cast<int>(rng.int_in(0, 3));
        // Build u = unit * (y^d + lower terms in y with vanishing axis part).
        Jet unit = random_jet(rng, 2, kOrder, true);
        JetPoly w(1, 2);
        w.coeffs.push_back(Jet::constant(1, kOrder, Complex::of(1.0, 0.0)));
        for (int j = 1; j <= d; ++j) {
            Jet c = random_jet(rng, 1, kOrder, false);
            Exps zero{0};
            c.set_coeff(zero, Complex(128));  // Weierstrass shape: no constant term
            w.coeffs.push_back(c);
        }
        Jet u = unit * w.to_jet(kOrder);
        WeierstrassFactor wf = weierstrass_prepare(u, 1);
        CHECK(wf.d == d);
        Jet recon = wf.unit * wf.w.to_jet(kOrder);
        CHECK(maxc(recon - u, kOrder) < 1e-20);
    }
}

TEST_CASE("weierstrass division") {
    std::vector<std::string> xy = {"x", "y"};
    Jet u = Jet::from_poly(parse_poly("(y^2+x*y-x)*(1+x+y)", xy), kOrder);
    WeierstrassFactor wf = weierstrass_prepare(u, 1);

    Rng rng(77);
    for (int t = 0; t < 6; ++t) {
        Jet f = random_jet(rng, 2, kOrder, false);
        for (int p = 1; p <= 2; ++p) {
            WeierstrassDivision div = weierstrass_divide(f, wf.w, p);
            CHECK(div.remainder.degree() < p * wf.d);
            Jet recon = div.quotient * wf.w.pow(static_cast<unsigned>(p)).to_jet(kOrder) +
                        div.remainder.to_jet(kOrder);
            CHECK(maxc(recon - f, kOrder) < 1e-18);
        }
    }

    // Division by an exact power of the variable keeps full validity in
    // the remainder and shifts the quotient.
    JetPoly x2(0, 1);
    x2.coeffs.push_back(Jet::constant(0, kOrder, Complex::of(1.0, 0.0)));
    x2.coeffs.push_back(Jet(0, kOrder));
    x2.coeffs.push_back(Jet(0, kOrder));
    Jet f = exp_jet(kOrder);
    WeierstrassDivision div = weierstrass_divide(f, x2, 1);
    CHECK(div.quotient.valid() == kOrder - 2);
    CHECK(div.remainder.coeffs.back().coeff(Exps{}).re().to_double() == Catch::Approx(1.0));
    Jet recon = div.quotient * Jet::coordinate(1, kOrder, 0).pow(2) + div.remainder.to_jet(kOrder);
    CHECK(maxc(recon - f, kOrder) < 1e-30);
}

TEST_CASE("tougeron correction on the square root branch") {
    // A = z^2 - (1 + x), alpha = 1 + x/2, c = (x^2/4) / (2 + x)^2.
    int D = kOrder;
    Jet one = Jet::constant(1, D, Complex::of(1.0, 0.0));
    Jet x = Jet::coordinate(1, D, 0);
    ZPoly A;
    A.c = {-(one + x), Jet(1, D), one};

    Jet alpha = one + x.scale(Complex::of(0.5, 0.0));
    Jet two_plus_x = one.scale(Complex::of(2.0, 0.0)) + x;
    Jet c = (x * x).scale(Complex::of(0.25, 0.0)) * (two_plus_x * two_plus_x).invert_unit();

    TougeronConfig cfg;
    cfg.seed = 42;
    TougeronOutcome res = tougeron_correct(A, alpha, c, cfg);

    // sqrt(1+x) = 1 + x/2 - x^2/8 + x^3/16 - 5x^4/128 + ...
    MultiPoly expect(1);
    expect.add_term({0}, GaussRat(1));
    expect.add_term({1}, GaussRat(mpq_class(1, 2)));
    expect.add_term({2}, GaussRat(mpq_class(-1, 8)));
    expect.add_term({3}, GaussRat(mpq_class(1, 16)));
    expect.add_term({4}, GaussRat(mpq_class(-5, 128)));
    CHECK(maxc(res.b - Jet::from_poly(expect, D), 4) < 1e-12);
    CHECK(res.defect_after.to_double() < 1e-12);
    CHECK(res.bound_lhs.to_double() <= res.bound_rhs.to_double() * 1.05 + 1e-12);
    CHECK(res.iterations < 32);
}

TEST_CASE("tougeron rejects a hypothesis violation") {
    int D = 6;
    Jet one = Jet::constant(1, D, Complex::of(1.0, 0.0));
    Jet x = Jet::coordinate(1, D, 0);
    ZPoly A;
    A.c = {-(one + x), Jet(1, D), one};
    Jet alpha = one + x.scale(Complex::of(0.5, 0.0));
    Jet c = Jet::constant(1, D, Complex::of(10.0, 0.0));
    CHECK_THROWS_AS(tougeron_correct(A, alpha, c, {}), PipelineError);
}

TEST_CASE("tougeron diverges when the multiplier is too large") {
    // Constant-term multiplier of modulus 10 satisfying the hypothesis
    // exactly: alpha0^2 = -1/39 makes c(0) = 10.
    int D = 6;
    Jet one = Jet::constant(1, D, Complex::of(1.0, 0.0));
    Jet x = Jet::coordinate(1, D, 0);
    ZPoly A;
    A.c = {-(one + x), Jet(1, D), one};
    Jet alpha = Jet::constant(1, D, Complex::of(0.0, 1.0 / std::sqrt(39.0)));
    ZPoly dA = A.derivative();
    Jet u = dA.eval(alpha);
    Jet c = A.eval(alpha) * (u * u).invert_unit();
    CHECK(c.constant_term().abs().to_double() == Catch::Approx(10.0).epsilon(1e-6));
    CHECK_THROWS_AS(tougeron_correct(A, alpha, c, {}), ContractionError);
}

TEST_CASE("newton lift of a reciprocal") {
    // Solve u*v = 1 for v with u = exp(x), starting from v = 1.
    int D = kOrder;
    PolyOverJets eq;
    eq.nunknowns = 1;
    eq.add({1}, exp_jet(D));
    eq.add({0}, Jet::constant(1, D, Complex::of(-1.0, 0.0)));

    NewtonOutcome res = newton_solve({eq}, {Jet::constant(1, D, Complex::of(1.0, 0.0))});
    CHECK(maxc(res.solution[0] - exp_jet(D, -1), D) < 1e-12);
    CHECK(res.residual.to_double() <= 1e-12);
}

TEST_CASE("newton inversion of a map germ") {
    // Invert (x1 + x1^2, x2); the first component inverts to the Catalan
    // series x1 - x1^2 + 2x1^3 - 5x1^4 + 14x1^5 - ...
    int D = 6;
    std::vector<std::string> xs = {"x1", "x2"};
    std::map<int, Jet> base;
    base.emplace(0, Jet::coordinate(2, D, 0));
    base.emplace(1, Jet::coordinate(2, D, 1));

    // Equations in unknowns (u1, u2) over the base ring: u1 + u1^2 - x1,
    // u2 - x2.
    PolyOverJets e1, e2;
    e1.nunknowns = e2.nunknowns = 2;
    e1.add({1, 0}, Jet::constant(2, D, Complex::of(1.0, 0.0)));
    e1.add({2, 0}, Jet::constant(2, D, Complex::of(1.0, 0.0)));
    e1.add({0, 0}, -Jet::coordinate(2, D, 0));
    e2.add({0, 1}, Jet::constant(2, D, Complex::of(1.0, 0.0)));
    e2.add({0, 0}, -Jet::coordinate(2, D, 1));

    NewtonOutcome res = newton_solve({e1, e2}, {base.at(0), base.at(1)});
    const double cat[] = {0.0, 1.0, -1.0, 2.0, -5.0, 14.0, -42.0};
    for (int k = 1; k <= D; ++k)
        CHECK(res.solution[0].coeff({k, 0}).re().to_double() == Catch::Approx(cat[k]));
    CHECK(maxc(res.solution[1] - Jet::coordinate(2, D, 1), D) < 1e-20);
}

TEST_CASE("newton selects a square subsystem when overdetermined") {
    int D = 4;
    PolyOverJets eq;
    eq.nunknowns = 1;
    eq.add({1}, exp_jet(D));
    eq.add({0}, Jet::constant(1, D, Complex::of(-1.0, 0.0)));
    PolyOverJets dup = eq;  // a redundant copy

    NewtonOutcome res = newton_solve({eq, dup}, {Jet::constant(1, D, Complex::of(1.0, 0.0))});
    CHECK(res.picked.size() == 1);
    CHECK(res.residual_extra.to_double() <= 1e-10);
}

TEST_CASE("newton reports a singular jacobian") {
    int D = 4;
    PolyOverJets eq;
    eq.nunknowns = 1;
    eq.add({2}, Jet::constant(1, D, Complex::of(1.0, 0.0)));
    eq.add({0}, -Jet::coordinate(1, D, 0));
    CHECK_THROWS_AS(newton_solve({eq}, {Jet(1, D)}), PipelineError);
}
