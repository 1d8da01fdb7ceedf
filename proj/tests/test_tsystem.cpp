#include <catch2/catch_amalgamated.hpp>

#include "nash/poly_text.hpp"
#include "nash/tsystem.hpp"

using namespace nash;

namespace {

UniOverPoly image_poly(const std::string& text, const std::vector<std::string>& names) {
    MultiPoly p = parse_poly(text, names);
    return UniOverPoly::from_multipoly(p, p.nvars() - 1);
}

}  // namespace

TEST_CASE("coefficient equations of the quadratic image polynomial") {
    TSystem sys = build_T_system(image_poly("z^2-y", {"y", "z"}), 1, 1);
    REQUIRE(sys.T.size() == 3);
    REQUIRE(sys.coeff_vars() == 5);

    std::vector<std::string> names = sys.coeff_names();
    REQUIRE(names == std::vector<std::string>{"a1", "b1_0", "b1_1", "c0", "c1"});
    CHECK(sys.T[0] == parse_poly("2*c0*c1-b1_0-2*a1*c0^2", names));
    CHECK(sys.T[1] == parse_poly("c1^2-b1_1-a1^2*c0^2", names));
    CHECK(sys.T[2] == parse_poly("2*c1-2*a1*c0", names));
    CHECK(sys.verify_identities(image_poly("z^2-y", {"y", "z"})));
}

TEST_CASE("low-degree substitution leaves raw remainder coefficients") {
    UniOverPoly graph = image_poly("z-y", {"y", "z"});
    TSystem sys = build_T_system(graph, 1, 1);
    std::vector<std::string> names = sys.coeff_names();
    CHECK(sys.T[0] == parse_poly("c0-b1_0", names));
    CHECK(sys.T[1] == parse_poly("c1-b1_1", names));
    CHECK(sys.T[2] == parse_poly("1", names));

    MultiPoly expected = MultiPoly::variable(sys.full_vars(), sys.stilde_slot()) -
                         MultiPoly::variable(sys.full_vars(), sys.s_slot(1));
    CHECK(sys.Wtilde == expected);
    CHECK(sys.verify_identities(graph));
}

TEST_CASE("defining identities hold exactly for larger systems") {
    UniOverPoly cubic = image_poly("z^3-y1*z+y2", {"y1", "y2", "z"});
    for (int d = 1; d <= 2; ++d) {
        TSystem sys = build_T_system(cubic, 2, d);
        CHECK(sys.T.size() == static_cast<size_t>(3 * d));
        CHECK(sys.verify_identities(cubic));
    }

    UniOverPoly mixed = image_poly("z^2+y1*y2*z-y2^3", {"y1", "y2", "z"});
    TSystem sys = build_T_system(mixed, 2, 2);
    CHECK(sys.verify_identities(mixed));
}

TEST_CASE("system construction validates its inputs") {
    CHECK_THROWS_AS(build_T_system(image_poly("z^2-y", {"y", "z"}), 1, 0), PreconditionError);
    CHECK_THROWS_AS(build_T_system(image_poly("z^2-y", {"y", "z"}), 2, 1), PreconditionError);
}
