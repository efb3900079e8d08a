#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acyc/capitulation.hpp"

using namespace acyc;

TEST_CASE("sextic construction for m = 302") {
    // layer defined by x^3 - 93x - 458
    CubicPoly Q{Int(0), Int(-93), Int(-458)};
    SexticField K = make_sextic(Int(302), Q);
    CHECK(K.A.n == 6);
    // sqrt(-m) squared is -m
    QVec s = K.sqrt_m();
    QVec s2 = K.A.mul(s, s);
    CHECK(s2[0] == Rat(-302));
    for (size_t i = 1; i < 6; ++i) CHECK(s2[i] == 0);
    // sigma fixes sqrt(-m)
    CHECK(K.apply_sigma(s) == s);
    // sigma^3 is the identity on theta (checked in the constructor too)
    QVec th = K.theta();
    QVec t3 = K.apply_sigma(K.apply_sigma(K.apply_sigma(th)));
    CHECK(t3 == th);
    // the defining sextic is monic of degree 6 and irreducible-ish: check
    // that gamma actually has degree 6 (R[6] = 1)
    REQUIRE(K.R.size() == 7);
    CHECK(K.R[6] == 1);
}

TEST_CASE("class group of the m = 302 layer is [12, 3]") {
    CubicPoly Q{Int(0), Int(-93), Int(-458)};
    SexticField K = make_sextic(Int(302), Q);
    auto cls = ClassGroupNF::compute(K);
    CHECK(cls.shape.str() == "[12,3]");
    CHECK(cls.shape.three_part().str() == "[3,3]");
}

TEST_CASE("full capitulation analysis for m = 302") {
    CapitulationInputs in;
    in.m = 302;
    in.Q_red = CubicPoly{Int(0), Int(-93), Int(-458)};
    in.h3 = 3;
    in.ramified = true;
    in.disjunction_index = 1;
    auto R = capitulate(in);
    CHECK(R.H_K3.str() == "[3,3]");
    CHECK(R.verdict == "total");
    CHECK(R.image_order3 == 1);
    CHECK(R.kernel_order == 3);
    // norm rows all zero
    for (auto& row : R.norm_rows)
        for (auto& x : row) CHECK(x == 0);
    // Chevalley count: split, ramified: 3 * h3 = 9 = whole 3-part
    auto [k, ks] = make_pair_fields(Int(302));
    CHECK(R.chevalley_fixed3 == expected_fixed3(k, in.h3, true));
    // the two primes above 3 generate the full 3-part
    CHECK(R.ram_subgroup_order3 == 9);
    CHECK(R.primes_above_3.size() == 2);
    // prediction agrees
    AbGroup hk3;
    hk3.invariants = {Int(3)};
    CHECK(predict_capitulation(k, true, hk3, R.H_K3) == "total");
}

TEST_CASE("m = 87 trivial 3-part layer") {
    // layer x^3 - x^2 - 2x + 3, class group [2]
    CapitulationInputs in;
    in.m = 87;
    in.Q_red = CubicPoly{Int(-1), Int(-2), Int(3)};
    in.h3 = 3;
    in.ramified = false;
    in.disjunction_index = 3;
    auto R = capitulate(in);
    CHECK(R.H_K.str() == "[2]");
    CHECK(R.H_K3.trivial());
    CHECK(R.verdict == "total");
}

TEST_CASE("fixture-based verdicts reproduce the published kernels") {
    // m = 3647: H_K = [54, 3], rows [3,0] and [0,0]: kernel 3
    AbGroup HK;
    HK.invariants = {Int(54), Int(3)};
    auto R = capitulation_from_fixture(HK, {{Int(3), Int(0)}, {Int(0), Int(0)}}, Int(27), true, Int(1));
    CHECK(R.image_order3 == 9);
    CHECK(R.kernel_order == 3);
    CHECK(R.verdict == "partial(3)");

    // m = 32573: H_K = [126,3,3,3], row g1^3: kernel 3
    AbGroup HK2;
    HK2.invariants = {Int(126), Int(3), Int(3), Int(3)};
    auto R2 = capitulation_from_fixture(
        HK2, {{Int(3), Int(0), Int(0), Int(0)}}, Int(9), true, Int(1));
    CHECK(R2.kernel_order == 3);

    // m = 58213: H_K = [180,30,3,3,3], rows give an image of order 9 = h3
    AbGroup HK3;
    HK3.invariants = {Int(180), Int(30), Int(3), Int(3), Int(3)};
    auto R3 = capitulation_from_fixture(
        HK3,
        {{Int(3), Int(0), Int(1), Int(2), Int(2)}, {Int(6), Int(0), Int(1), Int(2), Int(2)}},
        Int(9), true, Int(1));
    CHECK(R3.kernel_order == 1);
    CHECK(R3.verdict == "injective");
}

TEST_CASE("filtration and classifier on a synthetic action") {
    // trivial group
    AbGroup t;
    CHECK(structure_classifier(t, Int(9), 1) == "not-applicable");
    // n = 2 with H ~ Z/9
    AbGroup z9;
    z9.invariants = {Int(9)};
    CHECK(structure_classifier(z9, Int(3), 2) == "case n<p");
    AbGroup z33;
    z33.invariants = {Int(3), Int(3), Int(3)};
    CHECK(structure_classifier(z33, Int(3), 3) == "case n=p");
}
