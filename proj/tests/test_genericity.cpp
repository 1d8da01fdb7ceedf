#include <catch2/catch_amalgamated.hpp>

#include "nash/genericity.hpp"
#include "nash/poly_text.hpp"

using namespace nash;

namespace {

VarietySpec variety(std::vector<std::string> base, std::vector<std::string> fiber,
                    const std::vector<std::string>& gens, int dim) {
    VarietySpec v;
    v.base_vars = std::move(base);
    v.fiber_vars = std::move(fiber);
    std::vector<std::string> names = v.all_names();
    for (const std::string& g : gens) v.generators.push_back(parse_poly(g, names));
    v.declared_dim = dim;
    return v;
}

}  // namespace

TEST_CASE("proper position keeps varieties that already project finitely") {
    VarietySpec parab = variety({"y"}, {"v"}, {"v^2-y"}, 1);
    ProperPosition p = find_proper_position(parab, 7);
    CHECK(p.change.is_identity());
    CHECK(p.change.attempts == 1);
    REQUIRE(p.variety.generators.size() == 1);
    CHECK(p.variety.generators[0] == parab.generators[0]);
}

TEST_CASE("proper position repairs a hyperbola") {
    VarietySpec hyper = variety({"y"}, {"v"}, {"y*v-1"}, 1);
    CHECK(!properness_check(hyper).certified);

    ProperPosition p = find_proper_position(hyper, 11);
    CHECK(!p.change.is_identity());
    CHECK(p.change.attempts > 1);
    CHECK(p.change.matrix.det() != 0);
    CHECK(p.change.matrix * p.change.inverse == QMatrix::identity(2));
    CHECK(properness_check(p.variety).certified);
    CHECK(p.change.undo(p.variety.generators[0]) == hyper.generators[0]);

    ProperPosition again = find_proper_position(hyper, 11);
    CHECK(again.change.matrix == p.change.matrix);
    CHECK(again.change.attempts == p.change.attempts);
}

TEST_CASE("proper position gives up on the full plane") {
    VarietySpec plane = variety({"y"}, {"v"}, {}, 1);
    CHECK_THROWS_AS(find_proper_position(plane, 3, 8), ExhaustionError);
}

TEST_CASE("linear form selection prefers coordinates") {
    VarietySpec parab = variety({"y"}, {"v"}, {"v^2-y"}, 1);
    std::vector<GaussRat> L1 = choose_linear_form(parab, 5);
    REQUIRE(L1.size() == 1);
    CHECK(L1[0] == GaussRat(1));

    VarietySpec two = variety({"y"}, {"v1", "v2"}, {"v1^2-y", "v2-v1"}, 1);
    std::vector<GaussRat> L2 = choose_linear_form(two, 5);
    REQUIRE(L2.size() == 2);
    CHECK(L2[0] == GaussRat(1));
    CHECK(L2[1] == GaussRat(0));

    // The difference of the two sheets collapses on this variety: its image
    // has degree 1 while the generic fiber holds 2 points.
    UniOverPoly collapsed = optimal_polynomial(two, {GaussRat(1), GaussRat(-1)});
    CHECK(collapsed.degree() == 1);
    CHECK(generic_fiber_count(two, 5) == 2);
}

TEST_CASE("linear form selection requires properness") {
    VarietySpec hyper = variety({"y"}, {"v"}, {"y*v-1"}, 1);
    CHECK_THROWS_AS(choose_linear_form(hyper, 5), PreconditionError);
}

TEST_CASE("regular direction accepts an already regular jet") {
    Jet u = Jet::coordinate(2, 6, 1) * Jet::coordinate(2, 6, 1) +
            Jet::coordinate(2, 6, 0) * Jet::coordinate(2, 6, 1).pow(3);
    RegularDirection r = find_regular_direction(u, 3);
    CHECK(r.change.is_identity());
    CHECK(r.d == 2);
    CHECK(Jet::max_abs_diff(r.jet, u, 6).is_zero());
}

TEST_CASE("regular direction shears a monomial cross") {
    Jet u = Jet::coordinate(2, 6, 0) * Jet::coordinate(2, 6, 1);
    RegularDirection r = find_regular_direction(u, 3);
    CHECK(r.d == 2);
    CHECK(r.change.attempts == 2);
    CHECK(!r.change.is_identity());
    CHECK(xn_regular_order(r.jet, 1) == 2);

    Jet back = r.change.undo(r.jet);
    CHECK(Jet::max_abs_diff(back, u, 6).is_zero());
}

TEST_CASE("regular direction rejects the zero jet") {
    Jet zero(2, 4);
    CHECK_THROWS_AS(find_regular_direction(zero, 1), PreconditionError);
}

TEST_CASE("coordinate changes round-trip polynomials exactly") {
    Rng rng(99);
    std::vector<std::string> xyz = {"x", "y", "z"};
    MultiPoly p = parse_poly("x^3-2*x*y*z+z^2-5", xyz);
    for (int t = 0; t < 4; ++t) {
        QMatrix M = detail::random_invertible(rng, 3, 3);
        ChangeRecord rec = ChangeRecord::of(M, "ambient", 99, t + 1);
        CHECK(rec.matrix * rec.inverse == QMatrix::identity(3));
        CHECK(rec.undo(rec.apply(p)) == p);
    }
}
