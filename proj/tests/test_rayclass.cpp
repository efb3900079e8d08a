#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acyc/rayclass.hpp"

using namespace acyc;

TEST_CASE("local unit group shapes") {
    // 3 inert, nu = 1: multiplicative group of the 9-element field
    auto [k7, u7] = make_pair_fields(Int(7));
    REQUIRE(k7.split3 == Split3::inert);
    CHECK(unit_group_mod3nu(k7, 1).str() == "[8]");

    // 3 split, nu = 2: (Z/9)^* per factor
    auto [k2, u2] = make_pair_fields(Int(2));
    REQUIRE(k2.split3 == Split3::split);
    CHECK(unit_group_mod3nu(k2, 2).str() == "[6,6]");

    // ramified with m = 3 mod 9: extra 3-torsion in the 1-units (3-rank 3)
    auto [k21, u21] = make_pair_fields(Int(21));
    REQUIRE(k21.split3 == Split3::ramified);
    CHECK(unit_group_mod3nu(k21, 3).rank_p(Int(3)) == 3);

    // ramified with m = 6 mod 9: 3-rank only 2
    auto [k87, u87] = make_pair_fields(Int(87));
    REQUIRE(k87.split3 == Split3::ramified);
    CHECK(unit_group_mod3nu(k87, 3).rank_p(Int(3)) == 2);
}

TEST_CASE("local dlog consistency") {
    for (long m : {2L, 7L, 21L, 87L, 302L}) {
        auto [k, u] = make_pair_fields(Int(m));
        for (long nu : {1L, 2L, 3L}) {
            auto U = local_unit_group(k, nu);
            // dlog is a homomorphism: check on a few elements
            std::vector<QuadElement> elts;
            for (long a = 1; a <= 4; ++a)
                for (long b = 0; b <= 3; ++b) {
                    QuadElement e{k.radicand, Rat(a), Rat(b)};
                    Rat n = e.norm();
                    if (n == 0 || mod(Int(n.get_num()), Int(3)) == 0) continue;
                    elts.push_back(e);
                    if (elts.size() >= 5) break;
                }
            for (size_t i = 0; i + 1 < elts.size(); ++i) {
                IntVec vi = U.dlog(elts[i]);
                IntVec vj = U.dlog(elts[i + 1]);
                IntVec vp = U.dlog(elts[i] * elts[i + 1]);
                // vi + vj - vp must lie in the relation lattice
                IntVec diff(U.ngens);
                for (size_t t = 0; t < U.ngens; ++t) diff[t] = vi[t] + vj[t] - vp[t];
                IntMat H = hnf_rows(U.relations);
                CHECK(hnf_contains(H, diff));
            }
        }
    }
}

TEST_CASE("ray class structures match reference data") {
    // m = 1400529: 3-parts [9,3], [9,9,3], [27,9,9], [81,27,9] at nu = 1..4
    auto [k, u] = make_pair_fields(Int(1400529));
    auto C = ClassGroupImag::compute(k);
    CHECK(C.structure.three_part().str() == "[3,3]");
    CHECK(ray_class_group(k, C, 1).three.str() == "[9,3]");
    CHECK(ray_class_group(k, C, 2).three.str() == "[9,9,3]");
    CHECK(ray_class_group(k, C, 3).three.str() == "[27,9,9]");
    CHECK(ray_class_group(k, C, 4).three.str() == "[81,27,9]");
    auto T = t_k(k, C);
    CHECK(T.T.str() == "[9]");
}

TEST_CASE("ray class structures m=335 and m=417") {
    {
        auto [k, u] = make_pair_fields(Int(335));
        auto C = ClassGroupImag::compute(k);
        CHECK(ray_class_group(k, C, 4).three.str() == "[243,27]");
        auto T = t_k(k, C);
        CHECK(T.T.trivial());
    }
    {
        auto [k, u] = make_pair_fields(Int(417));
        auto C = ClassGroupImag::compute(k);
        CHECK(ray_class_group(k, C, 3).three.str() == "[9,9,9]");
        auto T = t_k(k, C);
        CHECK(T.T.str() == "[9]");
        CHECK(rank_stabilization_check(k, C));
    }
}

TEST_CASE("torsion data of the fixture fields") {
    {
        auto [k, u] = make_pair_fields(Int(157019));
        auto C = ClassGroupImag::compute(k);
        auto T = t_k(k, C);
        CHECK(T.T.str() == "[9,3]");
        CHECK(T.ot == 27);
        CHECK(T.wbp == 1);
        CHECK(T.otbp == 27);
        CHECK(T.ramified_layer);
        CHECK(T.val == 4);
        CHECK(T.disjunction_index == 1);
    }
    {
        auto [k, u] = make_pair_fields(Int(3647));
        auto C = ClassGroupImag::compute(k);
        auto T = t_k(k, C);
        CHECK(T.T.str() == "[27]");
        CHECK(T.val == 5);
        CHECK(T.ramified_layer);
    }
    {
        auto [k, u] = make_pair_fields(Int(8139));
        auto C = ClassGroupImag::compute(k);
        auto T = t_k(k, C);
        CHECK(T.T.str() == "[9,3]");
        CHECK(T.wbp == 3);
        CHECK(T.otbp == 9);
        CHECK(T.ramified_layer);
        CHECK(T.val == 3);
    }
    {
        auto [k, u] = make_pair_fields(Int(302));
        auto C = ClassGroupImag::compute(k);
        auto T = t_k(k, C);
        CHECK(T.T.str() == "[3]");
        CHECK(T.val == 3);
        CHECK(T.ramified_layer);
    }
    {
        auto [k, u] = make_pair_fields(Int(87));
        auto C = ClassGroupImag::compute(k);
        auto T = t_k(k, C);
        CHECK(T.T.trivial());
        CHECK(!T.ramified_layer);
        CHECK(T.val == 1);  // otbp = 1, h3 = 3, eps = 1
        CHECK(T.disjunction_index == 3);
    }
    {
        auto [k, u] = make_pair_fields(Int(237));
        auto C = ClassGroupImag::compute(k);
        auto T = t_k(k, C);
        CHECK(T.T.str() == "[3]");
        CHECK(T.wbp == 3);
        CHECK(T.otbp == 1);
        CHECK(!T.ramified_layer);
        CHECK(T.val == 1);
    }
}

TEST_CASE("order formula on assorted fields") {
    for (long m : {5L, 87L, 237L, 302L, 335L, 417L, 3647L}) {
        auto [k, u] = make_pair_fields(Int(m));
        auto C = ClassGroupImag::compute(k);
        for (long nu = 1; nu <= 4; ++nu) {
            auto R = ray_class_group(k, C, nu);
            CHECK(ray_order_formula_holds(k, C, R));
        }
    }
}

TEST_CASE("rank identity rk3 H(3^nu) = 2 + rk3 T") {
    for (long m : {302L, 417L, 1400529L, 157019L}) {
        auto [k, u] = make_pair_fields(Int(m));
        auto C = ClassGroupImag::compute(k);
        auto T = t_k(k, C);
        for (long nu = 2; nu <= 4; ++nu) {
            auto R = ray_class_group(k, C, nu);
            CHECK(R.rank3() == 2 + T.T.rank());
        }
    }
}
