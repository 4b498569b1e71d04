#include <catch_amalgamated.hpp>

#include "properties.hpp"
#include "support.hpp"

using namespace hfsi;
using namespace hfsi::testing;

namespace {

FlatMetric block_metric() { return FlatMetric(RatMatrix{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}); }

/// (e_i ⋆ e_j) ⋆ e_k − e_i ⋆ (e_j ⋆ e_k) evaluated at a point, all i, j, k.
bool associative_at(const HesseFrobenius& hf, const std::vector<Rational>& pt) {
    const std::size_t n = hf.dim();
    std::vector<Rational> c(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) c[(i * n + j) * n + k] = hf.C.get({int(i), int(j), int(k)}).evaluate(pt);
    auto product = [&](const std::vector<Rational>& u, const std::vector<Rational>& v) {
        std::vector<Rational> out(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (u[i] == 0 || v[j] == 0) continue;
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l) out[l] += u[i] * v[j] * c[(i * n + j) * n + k] * hf.metric.g_inv(k, l);
            }
        return out;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                std::vector<Rational> ei(n, Rational(0)), ej(n, Rational(0)), ek(n, Rational(0));
                ei[i] = ej[j] = ek[k] = 1;
                if (product(product(ei, ej), ek) != product(ei, product(ej, ek))) return false;
            }
    return true;
}

}  // namespace

TEST_CASE("metric validation and inverse") {
    CHECK_THROWS_AS(FlatMetric(RatMatrix{{1, 2}, {3, 4}}), FormatError);
    CHECK_THROWS_AS(FlatMetric(RatMatrix{{1, 1}, {1, 1}}), FormatError);
    FlatMetric g = block_metric();
    CHECK(g.inverse_matrix() == g.matrix());
    FlatMetric s = FlatMetric::direct_sum(g, FlatMetric::euclidean(2));
    CHECK(s.dim() == 6);
    CHECK(s.g(4, 4) == 1);
    CHECK(s.g(0, 2) == 1);
    CHECK(s.g(0, 4) == 0);
}

TEST_CASE("raising an index of the zero tensor") {
    SymTensorField z(3, 3);
    CHECK(raise_last_index(z, FlatMetric::euclidean(3)).is_zero());
}

TEST_CASE("metric trace of cubic tensors") {
    CHECK(metric_trace(catalog("nilpotent4d").C, block_metric()).is_zero());
    std::vector<LaurentPoly> lambdas;
    for (std::size_t j = 0; j < 3; ++j) {
        Exponents e(3, 0);
        e[j] = -1;
        lambdas.push_back(LaurentPoly::monomial(e));
    }
    HesseFrobenius hf = diagonal_structure(lambdas);
    SymTensorField tr = metric_trace(hf.C, hf.metric);
    for (int k = 0; k < 3; ++k) CHECK(tr.get({k}) == lambdas[std::size_t(k)]);
    CHECK(metric_trace(SymTensorField(3, 3), FlatMetric::euclidean(3)).is_zero());
}

TEST_CASE("hessian examples") {
    const std::size_t n = 4;
    auto g = FlatMetric::euclidean(n);
    SymTensorField h = hessian(x(n, 1) * x(n, 1), g);
    CHECK(h.components().size() == 1);
    CHECK(h.get({0, 0}) == cst(n, 2));
    LaurentPoly v = x(n, 1) * x(n, 1) * x(n, 1) * make_rational(1, 2) + x(n, 1) * x(n, 3);
    SymTensorField h2 = hessian(v, block_metric());
    CHECK(h2.get({0, 0}) == x(n, 1) * Rational(3));
    CHECK(h2.get({0, 2}) == cst(n, 1));
    CHECK(h2.components().size() == 2);
    CHECK(hessian(cst(n, 7), g).is_zero());
}

TEST_CASE("laplacian examples") {
    const std::size_t n = 4;
    LaurentPoly sq(n);
    for (std::size_t i = 1; i <= n; ++i) sq += x(n, i) * x(n, i);
    CHECK(laplacian(sq, FlatMetric::euclidean(n)) == cst(n, 8));
    CHECK(laplacian(x(n, 1) * x(n, 3) + x(n, 2) * x(n, 4), block_metric()) == cst(n, 4));
    CHECK(laplacian(mono({-2}), FlatMetric::euclidean(1)) == mono({-4}, 6));
}

TEST_CASE("symmetry check on raw input") {
    RawCubic raw;
    raw[{0, 1, 2}] = cst(3, 1);
    raw[{1, 0, 2}] = cst(3, 2);
    auto bad = check_symmetry(raw, 3);
    CHECK_FALSE(bad.passed);
    CHECK(bad.failing.size() == 3);
    RawCubic ok;
    ok[{0, 1, 2}] = cst(3, 1);
    ok[{2, 1, 0}] = cst(3, 1);
    CHECK(check_symmetry(ok, 3).passed);
    CHECK(check_symmetry(RawCubic{}, 3).passed);
    SymTensorField s = symmetrize(ok, 3);
    CHECK(s.get({1, 2, 0}) == cst(3, 1));
}

TEST_CASE("nilpotent structure satisfies every axiom") {
    HesseFrobenius hf = catalog("nilpotent4d");
    CHECK(hf.C.components().size() == 2);
    CHECK(hf.C.get({0, 0, 0}) == cst(4, 1));
    CHECK(hf.C.get({1, 1, 1}) == cst(4, 1));
    CHECK(check_symmetry(hf).passed);
    CHECK(check_wdvv(hf).passed);
    CHECK(check_differential(hf).passed);
    CHECK(check_axioms(zero_structure(FlatMetric::euclidean(3))).passed());
}

TEST_CASE("semi-simple sign convention: -1/x passes, +1/x fails the differential axiom") {
    const std::size_t n = 3;
    std::vector<LaurentPoly> plus, minus;
    for (std::size_t j = 0; j < n; ++j) {
        Exponents e(n, 0);
        e[j] = -1;
        plus.push_back(LaurentPoly::monomial(e, 1));
        minus.push_back(LaurentPoly::monomial(e, -1));
    }
    CHECK(check_wdvv(diagonal_structure(plus)).passed);
    CHECK_FALSE(check_differential(diagonal_structure(plus)).passed);
    CHECK(check_axioms(diagonal_structure(minus)).passed());
    CHECK(check_axioms(semisimple_structure(3, {true, true, true})).passed());
    CHECK(semisimple_structure(4, {false, false, false, false}).C.is_zero());
    CHECK_THROWS_AS(semisimple_structure(2, {true, true}), DimensionMismatch);
}

TEST_CASE("WDVV agrees with brute-force associativity") {
    Gen gen(7);
    SECTION("dx1 dx1 dx2 on the Euclidean plane") {
        RawCubic raw;
        raw[{0, 0, 1}] = cst(2, 1);
        HesseFrobenius hf(FlatMetric::euclidean(2), symmetrize(raw, 2));
        CHECK(check_wdvv(hf).passed == associative_at(hf, gen.point(2)));
        CHECK_FALSE(check_wdvv(hf).passed);
    }
    SECTION("catalog structures are associative") {
        for (const char* name : {"nilpotent2d", "sw3d", "nilpotent4d", "sw4d"}) {
            HesseFrobenius hf = catalog(name);
            CHECK(check_wdvv(hf).passed);
            CHECK(associative_at(hf, gen.point(hf.dim())));
        }
    }
    SECTION("random constant cubics") {
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = std::size_t(gen.integer(2, 3));
            SymTensorField c(n, 3);
            detail::for_each_sorted_tuple(n, 3, [&](const IndexTuple& idx) {
                if (gen.integer(0, 2) == 0) c.set(idx, LaurentPoly::constant(n, gen.rational(3)));
            });
            HesseFrobenius hf(gen.metric(n), c);
            CHECK(check_wdvv(hf).passed == associative_at(hf, gen.point(n)));
        }
    }
}

TEST_CASE("Frobenius property of the product") {
    // g(X⋆Y, Z) = C(X, Y, Z) is symmetric, so g(X⋆Y, Z) = g(X, Y⋆Z).
    HesseFrobenius hf = catalog("nilpotent4d");
    TensorField up = raise_last_index(hf.C, hf.metric);
    detail::for_each_tuple(4, 3, [&](const IndexTuple& t) {
        LaurentPoly lhs(4), rhs(4);
        for (int a = 0; a < 4; ++a) {
            lhs += up.get({t[0], t[1], a}) * hf.metric.g(std::size_t(a), std::size_t(t[2]));
            rhs += up.get({t[1], t[2], a}) * hf.metric.g(std::size_t(t[0]), std::size_t(a));
        }
        CHECK(lhs == rhs);
    });
}

TEST_CASE("structure tensor examples") {
    StructurePair z = structure_tensor(zero_structure(FlatMetric::euclidean(3)));
    CHECK(z.T.is_zero());
    CHECK(z.T_hat.is_zero());

    StructurePair nil = structure_tensor(catalog("nilpotent4d"));
    CHECK(nil.T.get({0, 0, 0}) == cst(4, 3));
    CHECK(nil.T_hat.get({0, 0, 2}) == cst(4, 3));

    const std::size_t n = 4;
    std::vector<LaurentPoly> lambdas;
    for (std::size_t j = 0; j < n; ++j) {
        Exponents e(n, 0);
        e[j] = -1;
        lambdas.push_back(LaurentPoly::monomial(e, 1));
    }
    StructurePair ss = structure_tensor(diagonal_structure(lambdas));
    CHECK(ss.T.get({2, 2, 2}) == mono({0, 0, -1, 0}, 9, 4));
    CHECK(ss.T.get({0, 0, 2}) == mono({0, 0, -1, 0}, -3, 4));
    CHECK(ss.T.get({0, 1, 2}).is_zero());
}

TEST_CASE("structures from a Frobenius potential") {
    HesseFrobenius q = from_frobenius_potential(x(2, 1) * x(2, 2) + x(2, 1) * x(2, 1), FlatMetric::euclidean(2));
    CHECK(q.C.is_zero());
    HesseFrobenius c = from_frobenius_potential(x(2, 1) * x(2, 1) * x(2, 2) * make_rational(1, 2), FlatMetric::euclidean(2));
    CHECK(c.C.components().size() == 1);
    CHECK(c.C.get({1, 0, 0}) == cst(2, 1));
    CHECK_THROWS_AS(from_frobenius_potential(x(3, 1), FlatMetric::euclidean(2)), DimensionMismatch);
}

TEST_CASE("gluing") {
    HesseFrobenius g8 = catalog("glued8d");
    CHECK(g8.dim() == 8);
    CHECK(g8.metric.g(0, 2) == 1);
    CHECK(g8.metric.g(5, 5) == 1);
    CHECK(g8.metric.g(0, 5) == 0);
    CHECK(g8.C.get({4, 4, 4}) == LaurentPoly::monomial({0, 0, 0, 0, -1, 0, 0, 0}, -1));
    CHECK(check_axioms(g8).passed());

    HesseFrobenius ext = glue(catalog("nilpotent2d"), zero_structure(FlatMetric::euclidean(2)));
    CHECK(ext.dim() == 4);
    CHECK(ext.C.components().size() == 1);
    CHECK(ext.C.get({0, 0, 0}) == cst(4, 1));
}

TEST_CASE("catalog names") {
    CHECK(catalog("semisimple:4:1110").C == catalog("sw4d").C);
    CHECK_THROWS_AS(catalog("nope"), UnknownName);
    CHECK_THROWS_AS(catalog("semisimple:4:11"), UnknownName);
    CHECK_THROWS_AS(catalog("semisimple:2:11"), UnknownName);
    CHECK_THROWS_AS(catalog("semisimple:x:1"), UnknownName);
}

TEST_CASE("property: hessian trace equals laplacian") {
    auto r = properties::hessian_trace();
    INFO(r.first_failure);
    CHECK(r.ok());
}

TEST_CASE("property: raise then lower") {
    auto r = properties::raise_lower();
    INFO(r.first_failure);
    CHECK(r.ok());
}
