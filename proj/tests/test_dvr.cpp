#include "doctest.h"

#include "exlat/dvr.hpp"

#include <functional>
#include <random>

using namespace exlat;
using namespace exlat::dvr;

namespace {
PCtx Rp(int64_t p = 2) { return PCtx(p, p == 2 ? 32 : 24); }

// brute-force |Hom(A,B)| at p = 2 by enumerating matrices (independent oracle)
int64_t count_homs_brute(const PCtx& R, const Mod& A, const Mod& B) {
    // enumerate entries 0..p^min(ann_dst, small)-1 with validity filter; only
    // for torsion modules with small exponents
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < B.n(); ++i)
        for (int j = 0; j < A.n(); ++j) cells.push_back({i, j});
    int64_t count = 0;
    std::vector<int64_t> entry(cells.size(), 0);
    auto valid = [&](size_t c, int64_t v) {
        auto [i, j] = cells[c];
        int as = ann_exp(R, A, j), ad = ann_exp(R, B, i);
        return R.val(v) >= std::max(0, std::min(ad - as, R.k));
    };
    std::function<void(size_t)> rec = [&](size_t c) {
        if (c == cells.size()) { ++count; return; }
        auto [i, j] = cells[c];
        (void)j;
        int64_t m = R.pow_p(ann_exp(R, B, i));
        for (int64_t v = 0; v < m; ++v)
            if (valid(c, v)) { entry[c] = v; rec(c + 1); }
    };
    rec(0);
    return count;
}
} // namespace

TEST_CASE("hom_group closed form vs enumeration oracle") {
    PCtx R = Rp();
    // hom(R/P^3, R/P^2) = R/P^2
    CHECK(hom_group(R, mod_cyclic(3), mod_cyclic(2)) == GroupShape{{2}, 0});
    // hom(R/P^a, R) = 0
    CHECK(hom_group(R, mod_cyclic(4), mod_free(1)) == GroupShape{{}, 0});
    // hom(R + R/P, R/P^2) = R/P^2 + R/P
    CHECK(hom_group(R, make_mod({1}, 1), mod_cyclic(2)) == GroupShape{{2, 1}, 0});
    // enumeration agreement on small torsion pairs at p = 2
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            GroupShape g = hom_group(R, mod_cyclic(a), mod_cyclic(b));
            int64_t expect = 1;
            for (int e : g.torsion_exps) expect *= R.pow_p(e);
            CHECK(count_homs_brute(R, mod_cyclic(a), mod_cyclic(b)) == expect);
        }
    GroupShape g = hom_group(R, make_mod({1}, 1), mod_cyclic(2));
    int64_t expect = 1;
    for (int e : g.torsion_exps) expect *= R.pow_p(e);
    CHECK(count_homs_brute(R, make_mod({1}, 1), mod_cyclic(2)) == expect);
}

TEST_CASE("ext_group closed form") {
    PCtx R = Rp();
    CHECK(ext_group(R, mod_cyclic(3), mod_cyclic(2)) == GroupShape{{2}, 0});
    CHECK(ext_group(R, mod_free(1), mod_cyclic(5)) == GroupShape{{}, 0});
    CHECK(ext_group(R, mod_cyclic(2), mod_free(1)) == GroupShape{{2}, 0});
}

TEST_CASE("certificates: identity, zero map rejection, p-multiplication") {
    PCtx R = Rp();
    SUBCASE("0 -> X -> X certified") {
        Mod X = make_mod({2, 1}, 0);
        auto r = certify_ses(R, mor_zero(Mod{}, X), mor_identity(X));
        CHECK(std::holds_alternative<Ses>(r));
    }
    SUBCASE("Z/p --id--> Z/p --0--> Z/p rejected: not surjective") {
        Mod X = mod_cyclic(1);
        auto r = certify_ses(R, mor_identity(X), mor_zero(X, X));
        REQUIRE(std::holds_alternative<SesRejection>(r));
        CHECK(std::get<SesRejection>(r).reason == "not surjective");
    }
    SUBCASE("R/P >-> R/P^2 ->> R/P certified") {
        Mor i{mod_cyclic(1), mod_cyclic(2), PMat(1, 1)};
        i.m.at(0, 0) = 2; // multiplication by p
        Mor d{mod_cyclic(2), mod_cyclic(1), PMat(1, 1)};
        d.m.at(0, 0) = 1; // reduction
        auto r = certify_ses(R, i, d);
        CHECK(std::holds_alternative<Ses>(r));
    }
    SUBCASE("homology nonzero detected") {
        // R/P --p^2--> R/P^3 ->> R/P: composite zero, middle too big
        Mor i{mod_cyclic(1), mod_cyclic(3), PMat(1, 1)};
        i.m.at(0, 0) = 4;
        Mor d{mod_cyclic(3), mod_cyclic(1), PMat(1, 1)};
        d.m.at(0, 0) = 1;
        auto r = certify_ses(R, i, d);
        REQUIRE(std::holds_alternative<SesRejection>(r));
        CHECK(std::get<SesRejection>(r).reason == "homology nonzero");
    }
}

TEST_CASE("labels: realize, extract, p-action, baer") {
    PCtx R = Rp();
    SUBCASE("middle terms match the label") {
        Ses s = realize_label(R, ExtLabel{3, 2, 1});
        CHECK(s.B() == make_mod({4, 1}, 0));
        Ses t = realize_label(R, ExtLabel{3, 2, 2}); // split
        CHECK(t.B() == make_mod({3, 2}, 0));
        CHECK(is_split_ses(R, t));
        CHECK(!is_split_ses(R, s));
        Ses u = realize_label(R, ExtLabel{3, kFree, 1});
        CHECK(u.B() == make_mod({1}, 1)); // R + R/P
    }
    SUBCASE("p-action shifts labels and realizes multiplication by p") {
        // (m=3, l=2): p*sigma_{0,5} = sigma_{1,4}, p*sigma_{1,4} = 0
        CHECK(p_action(ExtLabel{3, 2, 0}) == ExtLabel{3, 2, 1});
        CHECK(p_action(ExtLabel{3, 2, 1}).is_split());
        // case (b), m = 3: p*sigma_0 = sigma_1, p*sigma_2 = 0
        CHECK(p_action(ExtLabel{3, kFree, 0}) == ExtLabel{3, kFree, 1});
        CHECK(p_action(ExtLabel{3, kFree, 2}).is_split());
        // Baer-sum oracle: p copies of realize(x) sum to realize(p_action(x))
        for (ExtLabel x : {ExtLabel{3, 2, 0}, ExtLabel{3, 2, 1}, ExtLabel{2, 3, 0},
                           ExtLabel{3, kFree, 0}, ExtLabel{3, kFree, 1}}) {
            Ses sx = realize_label(R, x);
            ExtCoords z = extract_ext(R, sx);
            ExtCoords pz = ext_coords_scale(R, sx.C(), sx.A(), R.p, z);
            ExtCoords want = label_coords(R, p_action(x));
            Mod C = sx.C(), A = sx.A();
            // classes agree up to a unit: compare valuations blockwise
            auto bl = ext_blocks(R, C, A);
            for (size_t t = 0; t < bl.size(); ++t) {
                int vo = bl[t].ord_exp;
                CHECK(std::min(R.val(pz[t]), vo) == std::min(R.val(want[t]), vo));
            }
            // and the Baer sum of p copies realizes it exactly
            Ses acc = realize_label(R, ExtLabel{x.m, x.ell, x.s()}); // split = zero class
            for (int64_t c = 0; c < R.p; ++c) acc = baer_sum(R, acc, sx);
            ExtCoords got = extract_ext(R, acc);
            CHECK(ext_coords_equal(R, C, A, got, pz));
        }
    }
    SUBCASE("extract o realize = id on all labels, m,l <= 4") {
        for (int m = 1; m <= 4; ++m)
            for (int l = 1; l <= 4; ++l)
                for (int a = 0; a <= std::min(m, l); ++a) {
                    ExtLabel x{m, l, a};
                    Ses s = realize_label(R, x);
                    CHECK(ext_coords_equal(R, s.C(), s.A(), extract_ext(R, s), label_coords(R, x)));
                }
    }
}

TEST_CASE("rad_ext formula") {
    PCtx R = Rp();
    RadExt r1 = rad_ext(R, 1, 3, 2);
    CHECK(r1.shape == GroupShape{{1}, 0});
    REQUIRE(r1.generator.has_value());
    CHECK(*r1.generator == ExtLabel{3, 2, 1}); // sigma_{1,4}
    CHECK(rad_ext(R, 2, 3, 2).shape == GroupShape{{}, 0});
    CHECK(rad_ext(R, 0, 3, 2).shape == GroupShape{{2}, 0});
    CHECK(rad_ext(R, 1, 3, kFree).shape == GroupShape{{2}, 0});
}

TEST_CASE("membership: E_L via Hom-exactness") {
    PCtx R = Rp();
    SUBCASE("split always exact") {
        Ses s = split_ses(R, mod_cyclic(2), mod_cyclic(3));
        CHECK(is_exact_EL(R, s, {1, 2, 3, 4}));
        CHECK(is_exact_Eprime(R, s));
    }
    SUBCASE("R/P^2 >-> R/P^4 ->> R/P^2 is not Hom(-,R/P^2)-exact") {
        // identity on R/P^2 does not extend over the multiplication-by-p^2
        // inclusion, so the restriction map misses it.
        Ses s = realize_label(R, ExtLabel{2, 2, 0});
        CHECK(s.B() == mod_cyclic(4));
        CHECK(!hom_exact_at(R, s, 2));
        CHECK(!is_exact_EL(R, s, {2}));
        // the paper's criterion applies to R >-> R/P^m + R ->> R/P^n:
        // exact for m, n >= l
        Ses t = realize_label(R, ExtLabel{3, kFree, 2}); // R >-> R/P^2+R ->> R/P^3
        CHECK(hom_exact_at(R, t, 2));
        CHECK(hom_exact_at(R, t, 1));
        CHECK(!hom_exact_at(R, t, 3));
    }
    SUBCASE("R/P^1 >-> R/P^3 ->> R/P^2 not exact at 2") {
        Ses s = realize_label(R, ExtLabel{2, 1, 0});
        CHECK(s.B() == mod_cyclic(3));
        CHECK(!is_exact_EL(R, s, {2}));
    }
    SUBCASE("radExt: sigma_a in E_[1,n] iff a >= n (m,l <= 4)") {
        for (int n = 1; n <= 3; ++n) {
            std::set<int> L;
            for (int t = 1; t <= n; ++t) L.insert(t);
            for (int m = 1; m <= 4; ++m)
                for (int l = 1; l <= 4; ++l)
                    for (int a = 0; a <= std::min(m, l); ++a) {
                        Ses s = realize_label(R, ExtLabel{m, l, a});
                        CHECK(is_exact_EL(R, s, L) == (a >= std::min({n, m, l})));
                    }
        }
    }
}

TEST_CASE("membership: E' via the torsion functor") {
    PCtx R = Rp();
    // R >-> R ->> R/P^n not in E'
    Ses s = realize_label(R, ExtLabel{3, kFree, 0});
    CHECK(s.B() == mod_free(1));
    CHECK(!is_exact_Eprime(R, s));
    // torsion sequences are in E'
    Ses t = realize_label(R, ExtLabel{2, 3, 1});
    CHECK(is_exact_Eprime(R, t));
    // R >-> R/P^m + R ->> R/P^n with n != m: not in E'
    Ses u = realize_label(R, ExtLabel{3, kFree, 2});
    CHECK(!is_exact_Eprime(R, u));
    // split mixed is in E'
    Ses v = split_ses(R, make_mod({1}, 0), make_mod({}, 1));
    CHECK(is_exact_Eprime(R, v));
}

TEST_CASE("pushout and pullback act on classes as expected") {
    PCtx R = Rp();
    // pushout of sigma_{1} in Ext(R/P^3, R/P^2) along p : R/P^2 -> R/P^3 gives class p^2
    Ses s = realize_label(R, ExtLabel{3, 2, 1});
    Mor f{mod_cyclic(2), mod_cyclic(3), PMat(1, 1)};
    f.m.at(0, 0) = 2;
    Ses po = pushout(R, s, f);
    CHECK(po.A() == mod_cyclic(3));
    CHECK(po.C() == mod_cyclic(3));
    ExtCoords z = extract_ext(R, po);
    CHECK(R.val(z[0]) == 2);
    // pullback along the projection R/P^4 ->> R/P^3 multiplies classes by
    // p^(4-3); here p * sigma_1 dies in the order-p^2 block (split pullback)
    Mor g{mod_cyclic(4), mod_cyclic(3), PMat(1, 1)};
    g.m.at(0, 0) = 1;
    Ses pb = pullback(R, s, g);
    CHECK(pb.C() == mod_cyclic(4));
    CHECK(pb.A() == mod_cyclic(2));
    CHECK(is_split_ses(R, pb));
    // pullback of sigma_1 in Ext(R/P^4, R/P^2) along the valuation-1 map
    // R/P^3 -> R/P^4 keeps the class at valuation 1
    Ses s4 = realize_label(R, ExtLabel{4, 2, 1});
    Mor h{mod_cyclic(3), mod_cyclic(4), PMat(1, 1)};
    h.m.at(0, 0) = 2;
    Ses pb2 = pullback(R, s4, h);
    CHECK(pb2.C() == mod_cyclic(3));
    ExtCoords z2 = extract_ext(R, pb2);
    CHECK(R.val(z2[0]) == 1);
}

TEST_CASE("closed sets of the truncated space") {
    CHECK(classify_closed_sets(1).size() == 4);
    CHECK(classify_closed_sets(3).size() == 16);
    ClosedSet c = closure_symbolic({2}, false, false, 5);
    CHECK(c == ClosedSet{{2}, false});
    ClosedSet d = closure_symbolic({1, 2, 3}, false, true, 3);
    CHECK(d.adic);
    CHECK(closure_symbolic({}, false, false, 4) == ClosedSet{{}, false});
}

TEST_CASE("gap detection") {
    CHECK(gap_detect({1, 3}, 5) == Gap{2, 2});
    CHECK(!gap_detect({1, 2, 3}, 5));
    CHECK(gap_detect({2, 5}, 5) == Gap{1, 1});
    CHECK(!gap_detect({}, 5));
    CHECK(!gap_detect({1}, 5));
    CHECK(gap_detect({4}, 5) == Gap{1, 3});
}

TEST_CASE("periodic coresolutions for gaps") {
    PCtx R = Rp();
    SUBCASE("L = {1,3}: period 1, middle R/P + R/P^3") {
        PeriodicCoresolution pc = periodic_coresolution(R, {1, 3}, Gap{2, 2});
        CHECK(pc.period == 1);
        CHECK(pc.s_exp == 2);
        CHECK(pc.steps[0].A() == mod_cyclic(2));
        CHECK(pc.steps[0].B() == make_mod({3, 1}, 0));
        CHECK(pc.steps[0].C() == mod_cyclic(2));
    }
    SUBCASE("L = {2}: gap [1,1], a=1 case collapses to period 1") {
        PeriodicCoresolution pc = periodic_coresolution(R, {2}, Gap{1, 1});
        CHECK(pc.period == 1);
        CHECK(pc.s_exp == 1);
        CHECK(pc.steps[0].B() == mod_cyclic(2));
    }
    SUBCASE("L = {1,4}: gap [2,3], odd case, period 2, middle R/P + R/P^4") {
        PeriodicCoresolution pc = periodic_coresolution(R, {1, 4}, Gap{2, 3});
        CHECK(pc.period == 2);
        CHECK(pc.s_exp == 2);
        CHECK(pc.steps[0].B() == make_mod({4, 1}, 0));
        CHECK(pc.steps[0].C() == mod_cyclic(3));
        CHECK(pc.steps[1].C() == mod_cyclic(2));
    }
}

TEST_CASE("gldim_EL") {
    PCtx R = Rp();
    ExponentSet L13{{1, 3}, false};
    auto g = gldim_EL(R, L13, false, 5);
    CHECK(std::holds_alternative<GldimInfinite>(g));
    ExponentSet L12{{1, 2}, false};
    CHECK(std::get<int>(gldim_EL(R, L12, false, 5)) == 1);
    ExponentSet Lfull{{1, 2, 3, 4, 5}, true};
    CHECK(std::get<int>(gldim_EL(R, Lfull, true, 5)) == 0);
    ExponentSet Lempty{{}, false};
    CHECK(std::get<int>(gldim_EL(R, Lempty, true, 5)) == 1); // E'
}

TEST_CASE("dedekind decomposition") {
    // X = Z/4 + Z/9, Y = Z/8: only the 2-part contributes, = Z/4
    DedekindModule X, Y;
    X.parts[2] = mod_cyclic(2);
    X.parts[3] = mod_cyclic(2); // Z/9 = (Z/3^2)
    Y.parts[2] = mod_cyclic(3);
    auto comps = dedekind_ext_decompose({2, 3}, X, Y, {});
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].prime == 2);
    CHECK(comps[0].full == GroupShape{{2}, 0});
    CHECK(comps[1].full == GroupShape{{}, 0});
    // M = {2}, n_2 = 1: rad^1 Ext(Z/4, Z/8) = Z/2
    auto comps2 = dedekind_ext_decompose({2, 3}, X, Y, {{2, 1}});
    CHECK(comps2[0].component == GroupShape{{1}, 0});
    CHECK(comps2[0].in_M);
    // the 3-component (outside M) is the full tor(M^c) part
    CHECK(!comps2[1].in_M);
    CHECK(comps2[1].component == comps2[1].full);
    CHECK_THROWS(dedekind_ext_decompose({2}, X, Y, {{5, 1}}));
}

TEST_CASE("dedekind closed sets") {
    auto all = dedekind_classify_closed({2, 3}, 1);
    // per prime: exponent subsets {}, {1}; adic subsets of {2,3}: 2*2*4 = 16
    CHECK(all.size() == 16);
    DedekindClosedSet u;
    u.adic = {2, 3};
    CHECK(dedekind_is_closed(u, {}));
    DedekindClosedSet v;
    v.finite[3] = {1};
    CHECK(dedekind_is_closed(v, {{3, false}}));
    CHECK(!dedekind_is_closed(v, {{3, true}})); // infinite tail at 3 forces the adic point
    v.adic.insert(3);
    CHECK(dedekind_is_closed(v, {{3, true}}));
}

TEST_CASE("ext group element count oracle: |Ext| = p^min vs SNF cokernel") {
    for (int64_t p : {2, 3}) {
        PCtx R(p, 30);
        for (int m = 1; m <= 6; ++m)
            for (int l = 1; l <= 6; ++l) {
                GroupShape g = ext_group(R, mod_cyclic(m), mod_cyclic(l));
                REQUIRE(g.torsion_exps.size() == 1);
                CHECK(g.torsion_exps[0] == std::min(m, l));
                // independent oracle: Ext^1(R/P^m, A) = A / p^m A via the SNF
                // cokernel of multiplication by p^m on A = R/P^l
                PMat mul(1, 1);
                mul.at(0, 0) = R.pow_p(m);
                CokerShape sh = pm_coker(R, mul, {l});
                REQUIRE(sh.torsion_exps.size() == 1);
                CHECK(sh.torsion_exps[0] == std::min(m, l));
            }
    }
}
