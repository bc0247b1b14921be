#include "doctest.h"

#include "exlat/padic.hpp"
#include "exlat/pmatrix.hpp"

#include <random>

using namespace exlat;

TEST_CASE("scalar arithmetic and valuations") {
    PCtx R(2, 20);
    CHECK(R.val(0) == 20);
    CHECK(R.val(12) == 2);
    CHECK(R.val(R.neg(4)) == 2);
    CHECK(R.mul(R.inv_unit(5), 5) == 1);
    CHECK(R.divide(12, 4) == 3);
    PCtx R3(3, 12);
    CHECK(R3.val(18) == 2);
    CHECK(R3.mul(R3.inv_unit(7), 7) == 1);
}

TEST_CASE("snf: frozen examples") {
    PCtx R(2, 20);
    SUBCASE("identity") {
        Snf s = pm_snf(R, PMat::identity(3));
        CHECK(s.diag_vals == std::vector<int>{0, 0, 0});
    }
    SUBCASE("1x1 p^2") {
        PMat m(1, 1);
        m.at(0, 0) = 4;
        Snf s = pm_snf(R, m);
        CHECK(s.diag_vals == std::vector<int>{2});
    }
    SUBCASE("[[p,1],[0,p]] -> valuations (0,2)") {
        PMat m(2, 2);
        m.at(0, 0) = 2; m.at(0, 1) = 1;
        m.at(1, 0) = 0; m.at(1, 1) = 2;
        Snf s = pm_snf(R, m);
        CHECK(s.diag_vals == std::vector<int>{0, 2});
    }
}

TEST_CASE("snf transform identities on random matrices") {
    std::mt19937_64 rng(7);
    for (int64_t p : {2, 3}) {
        PCtx R(p, 16);
        for (int trial = 0; trial < 60; ++trial) {
            int r = 1 + int(rng() % 4), c = 1 + int(rng() % 4);
            PMat A(r, c);
            for (auto& x : A.a) x = R.reduce(int64_t(rng() % 200) - 100);
            Snf s = pm_snf(R, A);
            CHECK(pm_equal(R, pm_mul(R, pm_mul(R, s.u, A), s.v), s.d));
            CHECK(pm_equal(R, pm_mul(R, s.u, s.uinv), PMat::identity(r)));
            CHECK(pm_equal(R, pm_mul(R, s.v, s.vinv), PMat::identity(c)));
            // diagonal valuations nondecreasing
            for (size_t i = 1; i < s.diag_vals.size(); ++i)
                CHECK(s.diag_vals[i - 1] <= s.diag_vals[i]);
        }
    }
}

TEST_CASE("solve with annihilators") {
    PCtx R(2, 20);
    // x * 2 = 4 in Z/8: x = 2 works
    PMat A(1, 1);
    A.at(0, 0) = 2;
    auto sol = pm_solve(R, A, {4}, {3});
    REQUIRE(sol.has_value());
    CHECK(R.val(R.sub(R.mul(2, (*sol)[0]), 4)) >= 3);
    // x * 4 = 2 in Z/8: no solution
    A.at(0, 0) = 4;
    CHECK(!pm_solve(R, A, {2}, {3}).has_value());
    // but x * 4 = 2 mod 2 is solvable (annihilator p^1)
    CHECK(pm_solve(R, A, {2}, {1}).has_value());
}

TEST_CASE("cokernel shapes") {
    PCtx R(2, 20);
    // coker of multiplication by p^3 on R: R/P^3
    PMat A(1, 1);
    A.at(0, 0) = 8;
    CokerShape sh = pm_coker(R, A, {R.k});
    CHECK(sh.free_rank == 0);
    CHECK(sh.torsion_exps == std::vector<int>{3});
    // zero map into R: cokernel free of rank 1
    PMat Z(1, 0);
    sh = pm_coker(R, Z, {R.k});
    CHECK(sh.free_rank == 1);
    CHECK(sh.torsion_exps.empty());
    // surjectivity
    PMat B(2, 2);
    B.at(0, 0) = 1; B.at(1, 1) = 3;
    CHECK(pm_surjective(R, B, {2, 4}));
    B.at(1, 1) = 2;
    CHECK(!pm_surjective(R, B, {2, 4}));
}
