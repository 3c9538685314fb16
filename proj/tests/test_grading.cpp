#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "formality/grading.hpp"

using namespace formality;

namespace {

Cdga sphere2(int N = 6) {
    GeneratorSet gens({{"e2", 2}, {"e3", 3}});
    std::map<std::string, Polynomial> d;
    d["e3"] = Polynomial::single(Monomial{{2, 0}}, 1);
    return Cdga(gens, d, N);
}

Cdga heisenberg(int N = 4) {
    GeneratorSet gens({{"x", 1}, {"y", 1}, {"z", 1}});
    std::map<std::string, Polynomial> d;
    d["z"] = Polynomial::single(Monomial{{1, 1, 0}}, 1);
    return Cdga(gens, d, N);
}

Cdga torus2(int N = 4) { return Cdga(GeneratorSet({{"x", 1}, {"y", 1}}), {}, N); }

CdgaMorphism sphere_sigma(const Cdga& s, const Rational& c2, const Rational& c3) {
    std::map<std::string, Polynomial> imgs;
    imgs["e2"] = s.generator_poly(0) * c2;
    imgs["e3"] = s.generator_poly(1) * c3;
    return CdgaMorphism(s, s, imgs);
}

} // namespace

TEST_CASE("grading automorphism of a zero-differential algebra is a lift") {
    auto t = torus2();
    auto report = is_grading_lift(CdgaMorphism::grading(t, 2), 2, 4);
    CHECK(report.is_lift);
    for (const auto& e : report.per_degree) CHECK(e.ok);
}

TEST_CASE("sphere scaling is a grading lift") {
    auto s = sphere2();
    auto report = is_grading_lift(sphere_sigma(s, 4, 16), 2, 6);
    CHECK(report.is_lift);
}

TEST_CASE("Heisenberg scaling fails on H^2") {
    auto h = heisenberg();
    std::map<std::string, Polynomial> imgs;
    imgs["x"] = h.generator_poly(0) * Rational(2);
    imgs["y"] = h.generator_poly(1) * Rational(2);
    imgs["z"] = h.generator_poly(2) * Rational(4);
    auto report = is_grading_lift(CdgaMorphism(h, h, imgs), 2, 4);
    CHECK_FALSE(report.is_lift);
    CHECK(report.per_degree[0].ok);       // degree 1 scales by q
    CHECK_FALSE(report.per_degree[1].ok); // degree 2 scales by q^3, not q^2
}

TEST_CASE("search finds the grading map on zero-differential algebras") {
    auto t = torus2();
    auto found = search_diagonal_lift(t, 2, 4);
    REQUIRE(found);
    CHECK(found->images() == CdgaMorphism::grading(t, 2).images());
}

TEST_CASE("search solves the sphere chain constraint") {
    auto s = sphere2();
    auto found = search_diagonal_lift(s, 2, 6);
    REQUIRE(found);
    CHECK(found->image_of(0) == s.generator_poly(0) * Rational(4));
    CHECK(found->image_of(1) == s.generator_poly(1) * Rational(16));
}

TEST_CASE("search is exhausted on the Heisenberg model") {
    CHECK_FALSE(search_diagonal_lift(heisenberg(), 2, 4));
}

TEST_CASE("search soundness: every found morphism is a grading lift") {
    for (Rational q : {Rational(2), Rational(3), Rational(-2)}) {
        for (int which = 0; which < 2; ++which) {
            Cdga a = which == 0 ? sphere2() : torus2();
            int N = a.truncation();
            auto found = search_diagonal_lift(a, q, N);
            REQUIRE(found);
            CHECK(is_grading_lift(*found, q, N).is_lift);
        }
    }
}

TEST_CASE("weight decomposition of the sphere model") {
    auto s = sphere2();
    auto sigma = sphere_sigma(s, 4, 16);
    auto wd = weight_decompose_model(s, sigma, 2, 6);

    REQUIRE(wd.per_degree.size() == 6);
    // Degree 2: pure weight 2; degree 3: weight 4 (above the degree).
    REQUIRE(wd.per_degree[2].size() == 1);
    CHECK(wd.per_degree[2][0].weight == 2);
    REQUIRE(wd.per_degree[3].size() == 1);
    CHECK(wd.per_degree[3][0].weight == 4);
    // Degree 4 = e2^2 at weight 4, degree 5 = e2 e3 at weight 6.
    REQUIRE(wd.per_degree[4].size() == 1);
    CHECK(wd.per_degree[4][0].weight == 4);
    REQUIRE(wd.per_degree[5].size() == 1);
    CHECK(wd.per_degree[5][0].weight == 6);
}

TEST_CASE("pure grading on a zero-differential model") {
    auto t = torus2();
    auto wd = weight_decompose_model(t, CdgaMorphism::grading(t, 2), 2, 4);
    for (int i = 0; i < 4; ++i) {
        if (t.basis(i).empty()) continue;
        REQUIRE(wd.per_degree[i].size() == 1);
        CHECK(wd.per_degree[i][0].weight == i);
        CHECK(wd.per_degree[i][0].basis.dim() == t.basis(i).size());
    }
}

TEST_CASE("identity map has weights below the degree") {
    auto t = torus2();
    CHECK_THROWS_MATCHES(weight_decompose_model(t, CdgaMorphism::identity(t), 2, 4), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::WeightBelowDegree;
                         }));
}

TEST_CASE("non-diagonalizable transport is rejected") {
    // x -> 2x, y -> 2x + 2y is a chain map whose degree-1 block is a Jordan cell.
    auto t = torus2();
    std::map<std::string, Polynomial> imgs;
    imgs["x"] = t.generator_poly(0) * Rational(2);
    imgs["y"] = t.generator_poly(0) * Rational(2) + t.generator_poly(1) * Rational(2);
    CdgaMorphism jordan(t, t, imgs);
    CHECK_THROWS_MATCHES(weight_decompose_model(t, jordan, 2, 4), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::NotWeightDiagonalizable;
                         }));
}

TEST_CASE("weights are additive on products of eigenvectors") {
    auto s = sphere2();
    auto sigma = sphere_sigma(s, 4, 16);
    auto wd = weight_decompose_model(s, sigma, 2, 6);
    for (int d1 = 2; d1 <= 3; ++d1)
        for (int d2 = 2; d2 <= 3 && d1 + d2 <= 5; ++d2)
            for (const auto& c1 : wd.per_degree[d1])
                for (const auto& c2 : wd.per_degree[d2]) {
                    auto p1 = s.from_coords(c1.basis.vectors[0], d1);
                    auto p2 = s.from_coords(c2.basis.vectors[0], d2);
                    auto prod = s.multiply(p1, p2);
                    if (prod.is_zero()) continue;
                    CHECK(sigma.apply(prod) == prod * rational_pow(2, c1.weight + c2.weight));
                }
}

TEST_CASE("the differential preserves weights") {
    auto s = sphere2();
    auto sigma = sphere_sigma(s, 4, 16);
    auto wd = weight_decompose_model(s, sigma, 2, 6);
    for (int i = 0; i <= 4; ++i)
        for (const auto& comp : wd.per_degree[i])
            for (const auto& v : comp.basis.vectors) {
                auto dv = s.differential_poly(s.from_coords(v, i));
                if (dv.is_zero()) continue;
                CHECK(sigma.apply(dv) == dv * rational_pow(2, comp.weight));
            }
}
