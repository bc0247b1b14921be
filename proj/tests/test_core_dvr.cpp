#include "doctest.h"

#include "exlat/dvr_universe.hpp"

using namespace exlat;
using namespace exlat::dvr;
namespace co = exlat::core;

namespace {
const DvrUniverse& universe(int N) {
    static std::map<int, DvrUniverse> cache;
    auto it = cache.find(N);
    if (it == cache.end()) it = cache.emplace(N, build_dvr_universe(2, N)).first;
    return it->second;
}
} // namespace

TEST_CASE("universe pool: families, orbits, identify") {
    const DvrUniverse& U = universe(2);
    // family Ext(R/P^2, R/P^2) = Z/4: classes 0..3, orbits {0},{2},{1,3}
    int f = U.family_of.at({mod_cyclic(2), mod_cyclic(2)});
    const auto& F = U.families[f];
    CHECK(F.classes.size() == 4);
    CHECK(F.orbit_reps.size() == 3);
    CHECK(F.orbit[1] == F.orbit[3]);
    CHECK(F.orbit[0] != F.orbit[1]);
    CHECK(F.orbit[0] != F.orbit[2]);
    CHECK(F.complete);
    // identify a label realization
    Ses s = realize_label(U.bk.R, ExtLabel{2, 2, 1});
    co::ClassId id = co::identify(U, s);
    REQUIRE(id.valid());
    CHECK(id.family == f);
    CHECK(U.bk.R.val(F.classes[id.cls][0]) == 1);
}

TEST_CASE("closed-set structures: points round trip") {
    const DvrUniverse& U = universe(3);
    for (int n = 1; n <= 3; ++n) {
        ClosedSet u{{n}, false};
        ClosedSet back = points_of(U, closed_set_structure(U, u));
        CHECK(back == u);
    }
    ClosedSet ad{{2}, true};
    CHECK(points_of(U, closed_set_structure(U, ad)) == ad);
    ClosedSet empty{};
    CHECK(points_of(U, closed_set_structure(U, empty)) == empty);
    ClosedSet c1 = closure_roundtrip(U, {1, 3}, false, false);
    CHECK(c1 == ClosedSet{{1, 3}, false});
    CHECK(closure_roundtrip(U, {1, 2, 3}, false, true).adic);
}

TEST_CASE("meet and join") {
    const DvrUniverse& U = universe(3);
    auto E1 = closed_set_structure(U, {{1}, false});
    auto E2 = closed_set_structure(U, {{2}, false});
    auto E12 = closed_set_structure(U, {{1, 2}, false});
    auto Emax = closed_set_structure(U, {{}, false});
    SUBCASE("meet = predicate intersection = union of closed sets") {
        auto M = co::meet(E1, E2);
        CHECK(co::bitmap_eq(co::compute_bitmap(U, M), co::compute_bitmap(U, E12)));
        REQUIRE(M.has_descriptor);
        CHECK(M.descriptor == ClosedSet{{1, 2}, false});
        CHECK(co::bitmap_eq(co::compute_bitmap(U, co::meet(E1, E1)),
                            co::compute_bitmap(U, E1)));
        CHECK(co::bitmap_eq(co::compute_bitmap(U, co::meet(Emax, E2)),
                            co::compute_bitmap(U, E2)));
    }
    SUBCASE("join through closed sets: join(E_{1,2}, E_{2,3}) = E_{2}") {
        auto A = closed_set_structure(U, {{1, 2}, false});
        auto B = closed_set_structure(U, {{2, 3}, false});
        auto J = co::join(U, A, B);
        REQUIRE(std::holds_alternative<DvrStructure>(J));
        const auto& js = std::get<DvrStructure>(J);
        REQUIRE(js.has_descriptor);
        CHECK(js.descriptor == ClosedSet{{2}, false});
        CHECK(co::bitmap_eq(co::compute_bitmap(U, js), co::compute_bitmap(U, E2)));
    }
    SUBCASE("join(E, split) = E through the enumerated lattice") {
        auto split = split_structure(U);
        std::vector<DvrStructure> lattice;
        for (auto& cs : classify_closed_sets(3))
            lattice.push_back(closed_set_structure(U, cs));
        auto J = co::join(U, E1, split, &lattice);
        REQUIRE(std::holds_alternative<DvrStructure>(J));
        CHECK(co::bitmap_eq(co::compute_bitmap(U, std::get<DvrStructure>(J)),
                            co::compute_bitmap(U, E1)));
        auto nope = co::join(U, split, split);
        CHECK(std::holds_alternative<co::UnsupportedJoin>(nope));
    }
}

TEST_CASE("order reversal") {
    const DvrUniverse& U = universe(3);
    auto sets = classify_closed_sets(3);
    std::vector<co::Bitmap> bitmaps;
    for (auto& cs : sets)
        bitmaps.push_back(co::compute_bitmap(U, closed_set_structure(U, cs)));
    for (size_t i = 0; i < sets.size(); ++i)
        for (size_t j = 0; j < sets.size(); ++j) {
            bool leq = co::bitmap_leq(bitmaps[i], bitmaps[j]);
            bool contains = std::includes(sets[i].finite.begin(), sets[i].finite.end(),
                                          sets[j].finite.begin(), sets[j].finite.end()) &&
                            (sets[j].adic ? sets[i].adic : true);
            CHECK(leq == contains);
        }
}

TEST_CASE("axiom check") {
    const DvrUniverse& U = universe(2);
    SUBCASE("split structure passes") {
        auto rep = co::check_exact_axioms(U, split_structure(U));
        CHECK(rep.all_pass());
    }
    SUBCASE("E_max and E_L pass") {
        CHECK(co::check_exact_axioms(U, closed_set_structure(U, {{}, false})).all_pass());
        CHECK(co::check_exact_axioms(U, closed_set_structure(U, {{1}, false})).all_pass());
        CHECK(co::check_exact_axioms(U, closed_set_structure(U, {{1, 2}, true})).all_pass());
    }
    SUBCASE("E_max minus one non-split class fails pushout or pullback closure") {
        PCtx R = U.bk.R;
        Ses bad = realize_label(R, ExtLabel{2, 2, 0});
        co::ClassId bad_id = co::identify(U, bad);
        REQUIRE(bad_id.valid());
        int bad_orbit = U.families[bad_id.family].orbit[bad_id.cls];
        int bad_family = bad_id.family;
        DvrStructure S;
        S.name = "E_max minus sigma_{0,4}";
        const DvrUniverse* Up = &U;
        S.member = [Up, bad_family, bad_orbit](const Ses& s) {
            co::ClassId id = co::identify(*Up, s);
            if (id.valid() && id.family == bad_family &&
                Up->families[id.family].orbit[id.cls] == bad_orbit)
                return false;
            return true;
        };
        auto rep = co::check_exact_axioms(U, S);
        CHECK(!rep.all_pass());
        long pp_failures = 0;
        for (auto& e : rep.entries)
            if (e.axiom == "pushout closure" || e.axiom == "pullback closure")
                pp_failures += e.failures;
        CHECK(pp_failures > 0);
    }
}

TEST_CASE("ext1 relative groups") {
    const DvrUniverse& U = universe(3);
    auto Emax = closed_set_structure(U, {{}, false});
    auto r = co::ext1(U, Emax, mod_cyclic(3), mod_cyclic(2));
    REQUIRE(std::holds_alternative<co::Ext1Result<DvrBackend>>(r));
    CHECK(std::get<co::Ext1Result<DvrBackend>>(r).shape == GroupShape{{2}, 0});
    auto E1 = closed_set_structure(U, {{1}, false});
    auto r1 = co::ext1(U, E1, mod_cyclic(3), mod_cyclic(2));
    CHECK(std::get<co::Ext1Result<DvrBackend>>(r1).shape == GroupShape{{1}, 0});
    auto rp = co::ext1(U, Emax, mod_free(1), mod_cyclic(3));
    CHECK(std::get<co::Ext1Result<DvrBackend>>(rp).shape == GroupShape{});
}

TEST_CASE("baer sum group law on pool classes (N = 2)") {
    const DvrUniverse& U = universe(2);
    PCtx R = U.bk.R;
    int f = U.family_of.at({mod_cyclic(2), mod_cyclic(2)});
    const auto& F = U.families[f];
    for (size_t i = 0; i < F.classes.size(); ++i)
        for (size_t j = 0; j < F.classes.size(); ++j) {
            Ses bs = baer_sum(R, *F.seqs[i], *F.seqs[j]);
            ExtCoords z = extract_ext(R, bs);
            ExtCoords want = ext_coords_add(R, F.C, F.A, F.classes[i], F.classes[j]);
            CHECK(ext_coords_equal(R, F.C, F.A, z, want));
            Ses sb = baer_sum(R, *F.seqs[j], *F.seqs[i]);
            CHECK(ext_coords_equal(R, F.C, F.A, extract_ext(R, sb), z));
        }
    for (size_t i = 0; i < F.classes.size(); ++i) {
        Ses bs = baer_sum(R, *F.seqs[i], *F.seqs[0]);
        CHECK(ext_coords_equal(R, F.C, F.A, extract_ext(R, bs), F.classes[i]));
    }
}

TEST_CASE("injectives and coresolutions") {
    const DvrUniverse& U = universe(3);
    SUBCASE("injectives of E_L are the R/P^l, l in L (plus R under the adic flag)") {
        auto E13 = closed_set_structure(U, {{1, 3}, false});
        auto injs = co::injectives(U, E13);
        REQUIRE(injs.size() == 2);
        CHECK(injs[0] == mod_cyclic(1));
        CHECK(injs[1] == mod_cyclic(3));
        auto Ead = closed_set_structure(U, {{1}, true});
        auto injs2 = co::injectives(U, Ead);
        REQUIRE(injs2.size() == 2);
        CHECK(injs2[0] == mod_cyclic(1));
        CHECK(injs2[1] == mod_free(1));
    }
    SUBCASE("E_{1,3}: R/P^2 has the periodic coresolution of period 1") {
        auto E13 = closed_set_structure(U, {{1, 3}, false});
        auto c = co::injective_coresolution(U, E13, mod_cyclic(2), 8);
        CHECK(c.status == co::Coresolution<DvrBackend>::Status::Periodic);
        CHECK(c.period == 1);
        REQUIRE(!c.steps.empty());
        CHECK(c.steps[0].B() == make_mod({3, 1}, 0));
        auto c0 = co::injective_coresolution(U, E13, mod_cyclic(3), 8);
        CHECK(c0.status == co::Coresolution<DvrBackend>::Status::Terminated);
        CHECK(c0.length == 0);
    }
    SUBCASE("E_[1,2]: R/P^3 has no inflation into add{R/P, R/P^2}") {
        auto E12 = closed_set_structure(U, {{1, 2}, false});
        auto c = co::injective_coresolution(U, E12, mod_cyclic(3), 8);
        CHECK(c.status == co::Coresolution<DvrBackend>::Status::NotEnoughInjectives);
    }
}

TEST_CASE("gldim") {
    const DvrUniverse& U = universe(3);
    SUBCASE("split structure: 0") {
        auto g = co::gldim(U, split_structure(U), 8);
        REQUIRE(std::holds_alternative<int>(g));
        CHECK(std::get<int>(g) == 0);
    }
    SUBCASE("abelian structure: 1 (hereditary fallback; not enough injectives)") {
        auto g = co::gldim(U, closed_set_structure(U, {{}, false}), 8);
        REQUIRE(std::holds_alternative<int>(g));
        CHECK(std::get<int>(g) == 1);
    }
    SUBCASE("gap structure E_{1,3}: infinite with periodic witness") {
        auto g = co::gldim(U, closed_set_structure(U, {{1, 3}, false}), 8);
        CHECK(std::holds_alternative<co::GldimInfiniteW>(g));
    }
}

TEST_CASE("right-exactness criterion marks E_[1,n] hereditary") {
    const DvrUniverse& U = universe(3);
    CHECK(co::hereditary_right_exactness(U, closed_set_structure(U, {{1}, false})));
    CHECK(co::hereditary_right_exactness(U, closed_set_structure(U, {{1, 2}, false})));
    CHECK(co::hereditary_right_exactness(U, closed_set_structure(U, {{}, false})));
    CHECK(!co::hereditary_right_exactness(U, closed_set_structure(U, {{1, 3}, false})));
}
