#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acyc/cubic.hpp"
#include "acyc/quadfield.hpp"

using namespace acyc;

TEST_CASE("discriminants and irreducibility") {
    CubicPoly f{Int(0), Int(-1), Int(-1)};  // x^3 - x - 1
    CHECK(f.disc() == -23);
    CHECK(cubic_irreducible(f));
    CubicPoly g{Int(0), Int(0), Int(0)};  // x^3
    CHECK(!cubic_irreducible(g));
    CubicPoly h{Int(0), Int(-3), Int(2)};  // x^3 - 3x + 2 = (x-1)^2 (x+2)
    CHECK(!cubic_irreducible(h));
    CubicPoly t{Int(0), Int(0), Int(1)};  // x^3 + 1 = (x+1)(...)
    CHECK(!cubic_irreducible(t));
    // a = 0, t = 1: polydisc -27
    CubicPoly p{Int(0), Int(0), Int(-1)};
    CHECK(p.disc() == -27);
}

TEST_CASE("irreducibility mod q") {
    CubicPoly f{Int(0), Int(-3), Int(430)};  // x^3 - 3x + 430
    CHECK(cubic_irreducible_mod(f, Int(37)));
    CubicPoly g{Int(0), Int(0), Int(0)};
    CHECK(!cubic_irreducible_mod(g, Int(5)));
    CubicPoly h{Int(0), Int(-1), Int(-1)};
    CHECK(cubic_irreducible_mod(h, Int(2)));
    // large-q path agrees with brute force
    for (long q : {1009L, 2003L}) {
        for (long c : {1L, 7L, 23L}) {
            CubicPoly u{Int(0), Int(-3), Int(c)};
            CHECK(cubic_root_count_mod(u, Int(q)) == cubic_roots_mod(u, Int(q)));
        }
    }
}

TEST_CASE("field discriminant valuations") {
    // x^3 - x - 1: disc -23, 3-valuation 0
    CHECK(field_disc_v3(CubicPoly{Int(0), Int(-1), Int(-1)}) == 0);
    CHECK(field_disc(CubicPoly{Int(0), Int(-1), Int(-1)}) == -23);
    // x^3 + 3x + 5 (the mirror-unit cubic for m = 87): polydisc -27*29,
    // index 3 removed, field disc -87
    CHECK(field_disc(CubicPoly{Int(0), Int(3), Int(5)}) == -87);
    CHECK(field_disc_v3(CubicPoly{Int(0), Int(3), Int(5)}) == 1);
    // x^3 - 3x - 523 (ramified layer of m = 3647): wild 3-part
    CHECK(field_disc_v3(CubicPoly{Int(0), Int(-3), Int(-523)}) >= 3);
    // x^3 - 93x - 1160: field disc -3^4 * 102203
    CHECK(field_disc(CubicPoly{Int(0), Int(-93), Int(-1160)}) == -Int(81) * 102203);
}

TEST_CASE("prime decomposition in a cubic field") {
    CubicPoly f{Int(0), Int(-1), Int(-1)};
    AlgebraQ A = power_basis_algebra(f.coeff_vector());
    OrderLat O = nf::maximal_order(A, equation_order(A), {Int(23)});
    auto mult = nf::order_mult_table(A, O);
    {
        auto ps = nf::primes_above(A, O, mult, Int(2));
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].f == 3);
        CHECK(ps[0].e == 1);
    }
    {
        auto ps = nf::primes_above(A, O, mult, Int(5));
        REQUIRE(ps.size() == 2);
        long fsum = 0;
        for (auto& P : ps) fsum += P.e * P.f;
        CHECK(fsum == 3);
    }
    {
        auto ps = nf::primes_above(A, O, mult, Int(23));
        REQUIRE(ps.size() == 2);
        bool has_ram = false;
        for (auto& P : ps)
            if (P.e == 2) has_ram = true;
        CHECK(has_ram);
    }
}

TEST_CASE("same field detection") {
    CubicPoly f{Int(0), Int(-3), Int(-523)};
    CubicPoly g{Int(0), Int(0), Int(-2)};  // x^3 - 2
    CHECK(same_cubic_field(f, g) == FieldMatch::distinct);
    CHECK(same_cubic_field(f, f) == FieldMatch::equal);
    // translated copy: x -> x + 1
    CubicPoly ft{Int(3), Int(0), Int(-525)};
    CHECK(ft.disc() == f.disc());
    CHECK(same_cubic_field(f, ft) == FieldMatch::equal);
    // sign flip x -> -x gives the same field
    CubicPoly fs{Int(0), Int(-3), Int(523)};
    CHECK(same_cubic_field(f, fs) == FieldMatch::equal);
}

TEST_CASE("reduction of a raw radical polynomial") {
    // raw defining polynomial of the first layer over m = 157019, built from
    // the radical (7850 sqrt(471057) - 5387737); its reduced model defines
    // the same field as x^3 - 318x - 4067
    QuadElement w{Int(471057), Rat(-5387737), Rat(7850)};
    Rat N = w.norm();
    auto a = cbrt_exact(Int(N.get_num()));
    REQUIRE(a.has_value());
    CubicPoly raw{Int(0), Int(-3 * *a), Int(-Int(w.trace().get_num()))};
    CHECK(cubic_irreducible(raw));
    CubicPoly red = cubic_reduce(raw);
    CHECK(mpz_sizeinbase(red.c0.get_mpz_t(), 2) < 30);
    CubicPoly target{Int(0), Int(-318), Int(-4067)};
    CHECK(same_cubic_field(red, target) == FieldMatch::equal);
    CHECK(same_cubic_field(raw, target) == FieldMatch::equal);
}
