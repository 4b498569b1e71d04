#include <catch_amalgamated.hpp>

#include "properties.hpp"
#include "support.hpp"

using namespace hfsi;
using namespace hfsi::testing;

TEST_CASE("rationals are canonical and parse both forms") {
    CHECK(to_string(make_rational(2, 4)) == "1/2");
    CHECK(to_string(make_rational(-3, -6)) == "1/2");
    CHECK(to_string(make_rational(5)) == "5/1");
    CHECK(parse_rational("-6/4") == make_rational(-3, 2));
    CHECK(parse_rational("7") == make_rational(7));
    CHECK_THROWS_AS(parse_rational("1/0"), FormatError);
    CHECK_THROWS_AS(parse_rational("abc"), FormatError);
    CHECK_THROWS_AS(make_rational(1, 0), Error);
}

TEST_CASE("addition cancels and merges terms") {
    CHECK((x(2, 1) + (-x(2, 1))).is_zero());
    CHECK(x(2, 1) * x(2, 1) + x(2, 1) * x(2, 1) == mono({2, 0}, 2));
    LaurentPoly s = mono({-2, 0}) + x(2, 2);
    CHECK(s.size() == 2);
    CHECK(s.coefficient({-2, 0}) == 1);
    CHECK(s.coefficient({0, 1}) == 1);
}

TEST_CASE("multiplication of Laurent monomials") {
    CHECK(x(1, 1) * mono({-1}) == cst(1, 1));
    auto s = x(2, 1) + x(2, 2);
    CHECK(s * s == mono({2, 0}) + mono({1, 1}, 2) + mono({0, 2}));
    CHECK(mono({0, 0, 0, 2}, 1, 2) * make_rational(2) == mono({0, 0, 0, 2}));
    CHECK_THROWS_AS(x(2, 1) * x(3, 1), ArityMismatch);
}

TEST_CASE("partial derivatives") {
    CHECK(mono({-2, 0}).partial(0) == mono({-3, 0}, -2));
    const std::size_t n = 4;
    LaurentPoly c1_part = x(n, 2) * (x(n, 2) * x(n, 2) + x(n, 4) * Rational(2)) * make_rational(1, 2);
    CHECK(c1_part.partial(3) == x(n, 2));
    CHECK((x(n, 2) * x(n, 2)).partial(2).is_zero());
}

TEST_CASE("evaluation and poles") {
    std::vector<Rational> p{1, 3};
    CHECK((mono({-2, 0}) + x(2, 2)).evaluate(p) == 4);
    std::vector<Rational> q{2, 0, 5, 0};
    CHECK((x(4, 1) * x(4, 3)).evaluate(q) == 10);
    std::vector<Rational> zero{0, 1};
    CHECK_THROWS_AS(mono({-1, 0}).evaluate(zero), PoleAtPoint);
    std::vector<Rational> wrong{1};
    CHECK_THROWS_AS(x(2, 1).evaluate(wrong), ArityMismatch);
}

TEST_CASE("antiderivative and its obstruction") {
    LaurentPoly p = mono({2, 1}, 3) + mono({-3, 0});
    CHECK(p.antiderivative(0).partial(0) == p);
    CHECK_THROWS_AS(mono({-1, 2}).antiderivative(0), LogObstruction);
}

TEST_CASE("canonical term order is graded then lexicographic") {
    LaurentPoly p = mono({0, 2}) + mono({1, 0}) + mono({-2, 0}) + cst(2, 1) + mono({2, 0});
    std::vector<Exponents> order;
    for (const auto& [e, c] : p.terms()) order.push_back(e);
    REQUIRE(order.size() == 5);
    CHECK(order.front() == Exponents{-2, 0});
    CHECK(order[1] == Exponents{0, 0});
    CHECK(order[2] == Exponents{1, 0});
    CHECK(total_degree(order[3]) == 2);
    CHECK(total_degree(order[4]) == 2);
}

TEST_CASE("embed shifts variables into a larger ring") {
    LaurentPoly p = mono({1, -2});
    CHECK(p.embed(5, 2) == mono({0, 0, 1, -2, 0}));
}

TEST_CASE("nullspace examples") {
    auto k = nullspace(RatMatrix{{1, 1}, {2, 2}});
    REQUIRE(k.size() == 1);
    CHECK(k[0][0] == -k[0][1]);
    CHECK(k[0][1] != 0);
    CHECK(nullspace(RatMatrix::identity(3)).empty());
    CHECK(nullspace(RatMatrix(2, 3)).size() == 3);
}

TEST_CASE("rank examples") {
    CHECK(rank(RatMatrix::identity(4)) == 4);
    CHECK(rank(RatMatrix{{1, 2}, {2, 4}}) == 1);
    CHECK(rank(RatMatrix(3, 2)) == 0);
}

TEST_CASE("inverse of an invertible and a singular matrix") {
    RatMatrix m{{2, 1}, {1, 1}};
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(m * *inv == RatMatrix::identity(2));
    CHECK_FALSE(inverse(RatMatrix{{1, 2}, {2, 4}}));
}

TEST_CASE("echelon basis membership and reduced form") {
    EchelonBasis e(3);
    CHECK(e.insert(RatVector{1, 2, 3}));
    CHECK(e.insert(RatVector{0, 1, 1}));
    CHECK_FALSE(e.insert(RatVector{2, 5, 7}));
    CHECK(e.contains(to_sparse(RatVector{1, 3, 4})));
    CHECK_FALSE(e.contains(to_sparse(RatVector{0, 0, 1})));
    e.make_reduced();
    CHECK(e.rank() == 2);
}

TEST_CASE("property: ring axioms") {
    auto r = properties::ring_axioms();
    INFO(r.first_failure);
    CHECK(r.ok());
}

TEST_CASE("property: derivative rules") {
    auto r = properties::derivative_rules();
    INFO(r.first_failure);
    CHECK(r.ok());
}

TEST_CASE("property: evaluation homomorphism") {
    auto r = properties::evaluation_homomorphism();
    INFO(r.first_failure);
    CHECK(r.ok());
}

TEST_CASE("property: rank-nullity") {
    auto r = properties::rank_nullity();
    INFO(r.first_failure);
    CHECK(r.ok());
}
