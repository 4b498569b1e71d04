#include <catch_amalgamated.hpp>

#include "properties.hpp"
#include "reference.hpp"

using namespace hfsi;
using namespace hfsi::testing;

TEST_CASE("window monomials respect the box and the cap") {
    ExponentWindow w = ExponentWindow::uniform(2, -1, 2, 2);
    auto ms = window_monomials(w);
    for (const auto& e : ms) {
        CHECK(std::abs(e[0]) + std::abs(e[1]) <= 2);
        CHECK(e[0] >= -1);
        CHECK(e[1] <= 2);
    }
    CHECK(std::find(ms.begin(), ms.end(), Exponents{-1, -1}) != ms.end());
    CHECK(std::find(ms.begin(), ms.end(), Exponents{2, 1}) == ms.end());
    CHECK_THROWS_AS((ExponentWindow{{0, 2}, {1, 1}, 4}.validate(2)), EmptyWindow);
    CHECK_THROWS_AS(ExponentWindow::uniform(3, 0, 1).validate(2), EmptyWindow);
}

TEST_CASE("Wilczynski residual examples") {
    HesseFrobenius nil = catalog("nilpotent4d");
    CHECK(wilczynski_residual(nil, cst(4, 1)).is_zero());
    CHECK(wilczynski_residual(catalog("sw4d"), cst(4, 5)).is_zero());
    for (const auto& v : reference::nilpotent4d_potentials()) CHECK(wilczynski_residual(nil, v).is_zero());
    Gen gen(3);
    LaurentPoly combo(4);
    for (const auto& v : reference::nilpotent4d_potentials()) combo += v * gen.rational();
    CHECK(wilczynski_residual(nil, combo).is_zero());

    const LaurentPoly quartic = mono({4, 0, 0, 0});
    SymTensorField r = wilczynski_residual(nil, quartic);
    CHECK(r.get({0, 0}) == mono({2, 0, 0, 0}, 12));
    std::vector<Rational> pt{1, 1, 1, 1};
    CHECK(r.get({0, 0}).evaluate(pt) == 12);
}

TEST_CASE("sw4d family with the explicit window") {
    HesseFrobenius hf = catalog("semisimple:4:1110");
    ExponentWindow w{{-2, -2, -2, 0}, {2, 2, 2, 2}, 4};
    PotentialFamily f = solve_potentials(hf, w);
    CHECK(f.size() == 6);
    CHECK_FALSE(f.warning);
    for (const auto& v : reference::sw4d_potentials()) {
        CHECK(wilczynski_residual(hf, v).is_zero());
        CHECK(in_span(f.basis, v));
    }
    CHECK_FALSE(in_span(f.basis, mono({0, 0, 0, 2})));
}

TEST_CASE("nilpotent4d family with a polynomial window") {
    HesseFrobenius hf = catalog("nilpotent4d");
    PotentialFamily f = solve_potentials(hf, ExponentWindow::uniform(4, 0, 3));
    CHECK(f.size() == 6);
    for (const auto& v : reference::nilpotent4d_potentials()) CHECK(in_span(f.basis, v));
}

TEST_CASE("a small window reports a short family") {
    PotentialFamily f = solve_potentials(catalog("sw4d"), ExponentWindow::uniform(4, 0, 1));
    CHECK(f.size() < 6);
    CHECK(f.warning);
}

TEST_CASE("window enlargement does not change the family") {
    HesseFrobenius hf = catalog("sw3d");
    PotentialFamily a = solve_potentials(hf);
    PotentialFamily b = solve_potentials(hf, ExponentWindow::uniform(3, -3, 4, 5));
    REQUIRE(a.size() == b.size());
    for (const auto& v : b.basis) CHECK(in_span(a.basis, v));
}

TEST_CASE("glued flat structures give additively separated quadratic families") {
    HesseFrobenius flat = glue(zero_structure(FlatMetric::euclidean(2)), zero_structure(FlatMetric::euclidean(1)));
    PotentialFamily f = solve_potentials(flat, ExponentWindow::uniform(3, 0, 3));
    CHECK(f.size() == 5);
    for (const auto& v : f.basis)
        for (const auto& [e, c] : v.terms()) CHECK(total_degree(e) <= 2);
    SeparationReport rep = check_separation(f, {2, 1});
    CHECK(rep.separated);
    CHECK(rep.deficit == 2);
}

TEST_CASE("separation of the glued 8D family") {
    PotentialFamily f = solve_potentials(catalog("glued8d"));
    REQUIRE(f.size() == 10);
    SeparationReport rep = check_separation(f, {4, 4});
    CHECK(rep.separated);
    CHECK(rep.deficit == 2);
    CHECK(rep.factor_dimension_sum == 12);
    SeparationReport trivial = check_separation(f, {8});
    CHECK(trivial.separated);
    CHECK(trivial.coupled == 0);
    CHECK_THROWS_AS(check_separation(f, {4, 3}), SplitMismatch);
    CHECK_THROWS_AS(check_separation(f, {4, 4}, {6}), SplitMismatch);
}

TEST_CASE("property: Wilczynski residual is trace-free") {
    auto r = properties::residual_traceless();
    INFO(r.first_failure);
    CHECK(r.ok());
}
