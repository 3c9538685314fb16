#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "formality/gca.hpp"

using namespace formality;

namespace {

// Standard minimal model of the Heisenberg nilmanifold: three degree-1
// generators with dz = xy.
Cdga heisenberg(int N = 4) {
    GeneratorSet gens({{"x", 1}, {"y", 1}, {"z", 1}});
    std::map<std::string, Polynomial> d;
    Monomial xy{{1, 1, 0}};
    d["z"] = Polynomial::single(xy, 1);
    return Cdga(gens, d, N);
}

Cdga sphere2(int N = 6) {
    GeneratorSet gens({{"e2", 2}, {"e3", 3}});
    std::map<std::string, Polynomial> d;
    Monomial e2sq{{2, 0}};
    d["e3"] = Polynomial::single(e2sq, 1);
    return Cdga(gens, d, N);
}

Polynomial random_homogeneous(const Cdga& a, int degree, std::mt19937& rng) {
    std::uniform_int_distribution<int> dist(-3, 3);
    Polynomial p;
    for (const auto& m : a.basis(degree)) p.add_term(m, dist(rng));
    return p;
}

} // namespace

TEST_CASE("graded-commutative multiplication signs") {
    auto h = heisenberg();
    auto x = h.generator_poly(0), y = h.generator_poly(1);
    auto xy = h.multiply(x, y);
    auto yx = h.multiply(y, x);
    CHECK(xy == Polynomial::single(Monomial{{1, 1, 0}}, 1));
    CHECK(yx == xy * Rational(-1));
    CHECK(h.multiply(x, x).is_zero());

    auto s = sphere2();
    auto e2 = s.generator_poly(0);
    CHECK(s.multiply(e2, e2) == Polynomial::single(Monomial{{2, 0}}, 1));
}

TEST_CASE("graded commutativity on random homogeneous pairs") {
    auto s = sphere2();
    std::mt19937 rng(5);
    for (int da = 2; da <= 3; ++da)
        for (int db = 2; db <= 3; ++db) {
            auto p = random_homogeneous(s, da, rng);
            auto q = random_homogeneous(s, db, rng);
            int sign = (da * db % 2 == 0) ? 1 : -1;
            CHECK(s.multiply(p, q) == s.multiply(q, p) * Rational(sign));
        }
}

TEST_CASE("differential as a derivation") {
    auto h = heisenberg();
    auto z = h.generator_poly(2);
    CHECK(h.differential_poly(z) == Polynomial::single(Monomial{{1, 1, 0}}, 1));

    // d(yz) = -y*(xy) = 0 by the odd square.
    auto yz = Polynomial::single(Monomial{{0, 1, 1}}, 1);
    CHECK(h.differential_poly(yz).is_zero());

    CHECK(h.differential_poly(Polynomial::unit(3)).is_zero());
}

TEST_CASE("d squared vanishes on random homogeneous polynomials") {
    auto s = sphere2();
    auto h = heisenberg();
    std::mt19937 rng(11);
    for (int n = 1; n <= 4; ++n) {
        CHECK(s.differential_poly(s.differential_poly(random_homogeneous(s, n, rng))).is_zero());
        CHECK(h.differential_poly(h.differential_poly(random_homogeneous(h, n, rng))).is_zero());
    }
}

TEST_CASE("Leibniz rule on random pairs") {
    auto s = sphere2();
    std::mt19937 rng(13);
    for (int t = 0; t < 8; ++t) {
        int da = 2 + t % 2, db = 2 + (t / 2) % 2;
        auto a = random_homogeneous(s, da, rng);
        auto b = random_homogeneous(s, db, rng);
        auto lhs = s.differential_poly(s.multiply(a, b));
        auto rhs = s.multiply(s.differential_poly(a), b) +
                   s.multiply(a, s.differential_poly(b)) * Rational(da % 2 == 0 ? 1 : -1);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("monomial bases are deterministic and lexicographic") {
    auto h = heisenberg();
    const auto& b2 = h.basis(2);
    REQUIRE(b2.size() == 3);
    CHECK(to_string(h.generators(), b2[0]) == "x*y");
    CHECK(to_string(h.generators(), b2[1]) == "x*z");
    CHECK(to_string(h.generators(), b2[2]) == "y*z");

    auto s = sphere2();
    const auto& b4 = s.basis(4);
    REQUIRE(b4.size() == 1);
    CHECK(to_string(s.generators(), b4[0]) == "e2^2");

    REQUIRE(s.basis(0).size() == 1);
    CHECK(s.basis(0)[0].is_unit());
}

TEST_CASE("cohomology of the Heisenberg model") {
    auto h = heisenberg();
    const auto& h1 = h.cohomology(1);
    REQUIRE(h1.dim() == 2);
    CHECK(to_string(h.generators(), h.from_coords(h1.representatives[0], 1)) == "x");
    CHECK(to_string(h.generators(), h.from_coords(h1.representatives[1], 1)) == "y");

    const auto& h2 = h.cohomology(2);
    REQUIRE(h2.dim() == 2);
    CHECK(to_string(h.generators(), h.from_coords(h2.representatives[0], 2)) == "x*z");
    CHECK(to_string(h.generators(), h.from_coords(h2.representatives[1], 2)) == "y*z");
}

TEST_CASE("cohomology of the 2-sphere model") {
    auto s = sphere2();
    CHECK(s.cohomology(0).dim() == 1);
    CHECK(s.cohomology(1).dim() == 0);
    CHECK(s.cohomology(2).dim() == 1);
    for (int n = 3; n <= 5; ++n) CHECK(s.cohomology(n).dim() == 0);
}

TEST_CASE("cohomology dimension equals kernel minus image ranks") {
    auto h = heisenberg();
    for (int n = 1; n <= 3; ++n) {
        auto k = kernel_basis(h.diff_matrix(n)).dim();
        auto im = image_basis(h.diff_matrix(n - 1)).dim();
        CHECK(h.cohomology(n).dim() == k - im);
    }
}

TEST_CASE("zero differential exterior algebra") {
    Cdga line(GeneratorSet({{"x", 1}}), {}, 3);
    CHECK(line.cohomology(1).dim() == 1);
}

TEST_CASE("morphisms: identity, scalings, composition functoriality") {
    auto h = heisenberg();
    auto id = CdgaMorphism::identity(h);
    for (int n = 1; n <= 2; ++n) {
        auto m = id.induced_on_cohomology(n);
        CHECK(m == RationalMatrix::identity(m.rows()));
    }

    std::map<std::string, Polynomial> imgs;
    imgs["x"] = h.generator_poly(0) * Rational(2);
    imgs["y"] = h.generator_poly(1) * Rational(2);
    imgs["z"] = h.generator_poly(2) * Rational(4);
    CdgaMorphism sigma(h, h, imgs);

    auto m1 = sigma.induced_on_cohomology(1);
    CHECK(m1 == RationalMatrix::identity(2) * Rational(2));
    auto m2 = sigma.induced_on_cohomology(2);
    CHECK(m2 == RationalMatrix::identity(2) * Rational(8));

    auto sq = sigma.compose_with(sigma);
    CHECK(sq.induced_on_cohomology(1) == m1 * m1);
    CHECK(sq.induced_on_cohomology(2) == m2 * m2);
}

TEST_CASE("wrong-degree generator image is rejected") {
    auto h = heisenberg();
    std::map<std::string, Polynomial> imgs;
    imgs["x"] = Polynomial::single(Monomial{{1, 1, 0}}, 1); // degree 2 image for degree 1 gen
    imgs["y"] = h.generator_poly(1);
    imgs["z"] = h.generator_poly(2);
    CHECK_THROWS_MATCHES(CdgaMorphism(h, h, imgs), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::NotChainMap; }));
}

TEST_CASE("non-chain-map assignment is rejected") {
    auto h = heisenberg();
    std::map<std::string, Polynomial> imgs;
    imgs["x"] = h.generator_poly(0) * Rational(2);
    imgs["y"] = h.generator_poly(1);
    imgs["z"] = h.generator_poly(2); // d(sigma z) = xy but sigma(dz) = 2xy
    CHECK_THROWS_MATCHES(CdgaMorphism(h, h, imgs), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::NotChainMap; }));
}

TEST_CASE("truncation is a quotient: high-degree products vanish") {
    Cdga small(GeneratorSet({{"e2", 2}}), {}, 3);
    auto e2 = small.generator_poly(0);
    CHECK(small.multiply(e2, e2).is_zero());
    CHECK(small.basis(4).empty());
}
