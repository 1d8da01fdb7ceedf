#include <catch2/catch_amalgamated.hpp>

#include "nash/multipoly.hpp"
#include "nash/poly_text.hpp"
#include "nash/rational.hpp"
#include "nash/resultant.hpp"
#include "nash/rng.hpp"

using namespace nash;

namespace {

const std::vector<std::string> kXZ = {"x", "z"};

MultiPoly p(const std::string& text, const std::vector<std::string>& names = kXZ) {
    return parse_poly(text, names);
}

/// Brute-force determinant by cofactor expansion along the first row;
/// independent of the Bareiss code path.
MultiPoly det_cofactor(const std::vector<std::vector<MultiPoly>>& m, int nvars) {
    size_t n = m.size();
    if (n == 0) return MultiPoly::constant(nvars, GaussRat(1));
    if (n == 1) return m[0][0];
    MultiPoly acc(nvars);
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<MultiPoly>> minor;
        minor.reserve(n - 1);
        for (size_t r = 1; r < n; ++r) {
            std::vector<MultiPoly> row;
            row.reserve(n - 1);
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        MultiPoly term = m[0][j] * det_cofactor(minor, nvars);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

MultiPoly random_poly_in_z(Rng& rng, int max_deg_z) {
    MultiPoly f(2);
    int d = static_cast<int>(rng.int_in(1, max_deg_z));
    for (int k = 0; k <= d; ++k) {
        for (int xe = 0; xe <= 2; ++xe) {
            if (rng.below(3) == 0) continue;
            GaussRat c(rng.int_in(-4, 4));
            if (rng.below(8) == 0) c += GaussRat::i() * GaussRat(rng.int_in(-2, 2));
            f.add_term({xe, k}, c);
        }
    }
    // Force the intended z-degree so the Sylvester block has full size.
    if (f.degree_in(1) < d) f.add_term({0, d}, GaussRat(1));
    return f;
}

}  // namespace

TEST_CASE("gaussian rational arithmetic") {
    GaussRat a(mpq_class(1, 2), mpq_class(3, 4));
    GaussRat b(mpq_class(-2), mpq_class(1, 3));
    CHECK((a + b) - b == a);
    CHECK(a * b == b * a);
    CHECK((a * b) / b == a);
    CHECK(a * a.inv() == GaussRat(1));
    CHECK(GaussRat::i() * GaussRat::i() == GaussRat(-1));
    CHECK(a.conj().conj() == a);
    CHECK(GaussRat(mpq_class(3, 4)).norm() == mpq_class(9, 16));
    CHECK_THROWS_AS(a / GaussRat(0), PreconditionError);
    CHECK(GaussRat::fraction(2, 4) == GaussRat(mpq_class(1, 2)));
    CHECK(a.pow(3) == a * a * a);
}

TEST_CASE("gaussian rational text forms") {
    CHECK(GaussRat(0).to_string() == "0");
    CHECK(GaussRat(mpq_class(1, 2)).to_string() == "1/2");
    CHECK(GaussRat::i().to_string() == "i");
    CHECK((-GaussRat::i()).to_string() == "-i");
    CHECK((GaussRat(3) * GaussRat::i()).to_string() == "3*i");
    CHECK(GaussRat(mpq_class(1, 2), mpq_class(3, 4)).to_string() == "1/2+3/4*i");
    CHECK(GaussRat(mpq_class(1, 2), mpq_class(-1)).to_string() == "1/2-i");
    CHECK(GaussRat(mpq_class(-1, 2), mpq_class(-3, 4)).to_string() == "-1/2-3/4*i");
}

TEST_CASE("multipoly ring operations") {
    MultiPoly f = p("x^2*z-3/2*x+1");
    MultiPoly g = p("z^2-x");
    CHECK(f + g - g == f);
    CHECK(f * g == g * f);
    CHECK((f + g) * (f - g) == f * f - g * g);
    CHECK(f.pow(3) == f * f * f);
    CHECK(f.degree() == 3);
    CHECK(f.degree_in(0) == 2);
    CHECK(f.degree_in(1) == 1);
    CHECK(g.derivative(1) == p("2*z"));
    CHECK(g.derivative(0) == p("-1"));
    CHECK(p("(z-x)^2*(z+1)") == p("z^3+z^2-2*x*z^2-2*x*z+x^2*z+x^2"));
    CHECK(exact_divide(f * g, g) == f);
    CHECK_THROWS_AS(exact_divide(p("z+1"), p("z-x")), InternalError);
}

TEST_CASE("multipoly evaluation and substitution") {
    MultiPoly f = p("x^2*z-3/2*x+1");
    CHECK(f.eval({GaussRat(2), GaussRat(-1)}) == GaussRat(-6));

    // y*v - 1 under the shear y -> y + v becomes v^2 + y*v - 1.
    std::vector<std::string> yv = {"y", "v"};
    MultiPoly q = parse_poly("y*v-1", yv);
    QMatrix M = QMatrix::identity(2);
    M.at(0, 1) = 1;
    CHECK(q.substitute_linear(M) == parse_poly("v^2+y*v-1", yv));

    MultiPoly id = q.substitute_linear(QMatrix::identity(2));
    CHECK(id == q);

    // Composition with the inverse shear restores the original.
    CHECK(q.substitute_linear(M).substitute_linear(M.inverse()) == q);
}

TEST_CASE("variable embedding") {
    MultiPoly f = p("x*z^2+1");
    MultiPoly g = f.map_vars(4, {3, 1});
    std::vector<std::string> names4 = {"a", "z", "b", "x"};
    CHECK(g == parse_poly("x*z^2+1", names4));
    CHECK(g.used_vars() == std::vector<bool>{false, true, false, true});
}

TEST_CASE("canonical text round trip") {
    for (const std::string s :
         {"0", "1", "-1", "x", "-x", "i", "x^2*z-3/2*x+1", "z^3+x*z+x",
          "(1/2-3/4*i)*x", "i*z^2-i", "x^2+1/3"}) {
        MultiPoly f = p(s);
        CHECK(p(to_text(f, kXZ)) == f);
    }
    CHECK(to_text(p("z^2-x"), kXZ) == "z^2-x");
    CHECK(to_text(p("-x*z"), kXZ) == "-x*z");
    CHECK(to_text(MultiPoly(2), kXZ) == "0");
    CHECK_THROWS_AS(p("x+"), ParseError);
    CHECK_THROWS_AS(p("w^2"), ParseError);
    CHECK_THROWS_AS(p("x^-1"), ParseError);
}

TEST_CASE("division in a distinguished variable") {
    // z^3 by z^2 - x: quotient z, remainder x*z.
    auto [q1, r1] = divmod_in_var(p("z^3"), p("z^2-x"), 1);
    CHECK(q1 == p("z"));
    CHECK(r1 == p("x*z"));

    // z^2 by z - x: quotient z + x, remainder x^2.
    auto [q2, r2] = divmod_in_var(p("z^2"), p("z-x"), 1);
    CHECK(q2 == p("z+x"));
    CHECK(r2 == p("x^2"));

    // Divisor of larger degree leaves the input untouched.
    auto [q3, r3] = divmod_in_var(p("z+x"), p("z^2-x"), 1);
    CHECK(q3.is_zero());
    CHECK(r3 == p("z+x"));

    CHECK_THROWS_AS(divmod_in_var(p("z^2"), p("x*z-1"), 1), PreconditionError);

    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        MultiPoly f = random_poly_in_z(rng, 4);
        MultiPoly g = random_poly_in_z(rng, 3);
        // Make the divisor monic in z.
        int dg = g.degree_in(1);
        MultiPoly gm = g - g.coeff_in_var(1, dg) * MultiPoly::monomial({0, dg}, GaussRat(1)) +
                       MultiPoly::monomial({0, dg}, GaussRat(1));
        auto [q, r] = divmod_in_var(f, gm, 1);
        CHECK(q * gm + r == f);
        CHECK(r.degree_in(1) < dg);
    }
}

TEST_CASE("univariate view round trip") {
    MultiPoly f = p("z^3+x*z+x^2");
    UniOverPoly u = UniOverPoly::from_multipoly(f, 1);
    CHECK(u.degree() == 3);
    CHECK(u.is_monic());
    CHECK(u.to_multipoly() == f);
    CHECK(u.coeff_of(1) == p("x"));
    CHECK(u.coeff_of(2).is_zero());
    CHECK(u.derivative().to_multipoly() == p("3*z^2+x"));
}

TEST_CASE("resultant golden values") {
    CHECK(resultant(p("z^2-x"), p("z"), 1) == p("-x"));

    std::vector<std::string> abz = {"a", "b", "z"};
    CHECK(resultant(parse_poly("z-a", abz), parse_poly("z-b", abz), 2) ==
          parse_poly("a-b", abz));

    // One constant argument follows the convention Res(c, g) = c^deg(g).
    CHECK(resultant(p("x^2"), p("z^3-x"), 1) == p("x^6"));
    CHECK_THROWS_AS(resultant(p("x"), p("x^2"), 1), PreconditionError);
}

TEST_CASE("resultant matches cofactor expansion on random pairs") {
    Rng rng(20240817);
    for (int t = 0; t < 25; ++t) {
        MultiPoly f = random_poly_in_z(rng, 4);
        MultiPoly g = random_poly_in_z(rng, 4);
        auto fu = UniOverPoly::from_multipoly(f, 1);
        auto gu = UniOverPoly::from_multipoly(g, 1);
        MultiPoly oracle = det_cofactor(sylvester_matrix(fu, gu), 2);
        CHECK(resultant(f, g, 1) == oracle);
    }
}

TEST_CASE("resultant vanishes exactly on a shared root") {
    CHECK(resultant(p("(z-x)*(z+1)"), p("(z-x)*(z+x^2)"), 1).is_zero());
}

TEST_CASE("discriminant golden values") {
    CHECK(discriminant(UniOverPoly::from_multipoly(p("z^2-x"), 1)) == p("4*x"));

    std::vector<std::string> pqz = {"p", "q", "z"};
    CHECK(discriminant(UniOverPoly::from_multipoly(parse_poly("z^3+p*z+q", pqz), 2)) ==
          parse_poly("-4*p^3-27*q^2", pqz));

    CHECK(discriminant(UniOverPoly::from_multipoly(p("z-x"), 1)) == p("1"));
    CHECK_THROWS_AS(discriminant(UniOverPoly::from_multipoly(p("x"), 1)), PreconditionError);
}

TEST_CASE("squarefree part") {
    auto sqf = [&](const std::string& s) {
        return squarefree_part(UniOverPoly::from_multipoly(p(s), 1)).to_multipoly();
    };
    CHECK(sqf("(z-x)^2*(z+1)") == p("(z-x)*(z+1)"));
    CHECK(sqf("z^2") == p("z"));
    CHECK(sqf("(z-x)^3*(z+x)^2*(z+1)") == p("(z-x)*(z+x)*(z+1)"));
    CHECK(sqf("z^2-x") == p("z^2-x"));
    CHECK(sqf("3*z^2-3*x") == p("z^2-x"));
    CHECK_THROWS_AS(squarefree_part(UniOverPoly::from_multipoly(p("x*z-1"), 1)),
                    PreconditionError);
}

TEST_CASE("squarefree part strips multiplicities on random products") {
    Rng rng(99);
    std::vector<MultiPoly> factors = {p("z-x"), p("z+x"), p("z+1"), p("z-1"),
                                      p("z+x^2"), p("z^2-x")};
    for (int t = 0; t < 12; ++t) {
        MultiPoly prod = p("1");
        MultiPoly expect = p("1");
        std::vector<int> picked;
        for (size_t k = 0; k < factors.size(); ++k) {
            if (rng.below(2)) continue;
            int e = static_cast<int>(rng.int_in(1, 3));
            prod *= factors[k].pow(static_cast<unsigned>(e));
            expect *= factors[k];
            picked.push_back(static_cast<int>(k));
        }
        if (picked.empty()) continue;
        // z^2 - x shares no factor with the linear ones, so the expected
        // product is automatically squarefree.
        CHECK(squarefree_part(UniOverPoly::from_multipoly(prod, 1)).to_multipoly() == expect);
    }
}
