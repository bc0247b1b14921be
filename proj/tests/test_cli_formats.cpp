#include "doctest.h"

#include "exlat/dvr_universe.hpp"
#include "exlat/enomoto.hpp"
#include "exlat/json_io.hpp"
#include "exlat/verify.hpp"

using namespace exlat;

TEST_CASE("universe JSON export carries the declared schema") {
    auto U = dvr::build_dvr_universe(2, 2);
    nlohmann::json j = io::universe_to_json(U);
    REQUIRE(j.contains("objects"));
    REQUIRE(j.contains("homs"));
    REQUIRE(j.contains("ses"));
    CHECK(j["objects"].size() > 0);
    for (const auto& o : j["objects"]) {
        CHECK(o.contains("id"));
        CHECK(o.contains("summands"));
    }
    for (const auto& h : j["homs"]) {
        CHECK(h.contains("src"));
        CHECK(h.contains("dst"));
        CHECK(h.contains("group"));
        CHECK(h.contains("generators"));
    }
    for (const auto& s : j["ses"]) {
        CHECK(s.contains("A"));
        CHECK(s.contains("B"));
        CHECK(s.contains("C"));
        CHECK(s.contains("i"));
        CHECK(s.contains("d"));
    }
}

TEST_CASE("axiom report JSON") {
    auto U = dvr::build_dvr_universe(2, 2);
    auto rep = core::check_exact_axioms(U, dvr::closed_set_structure(U, {{1}, false}));
    nlohmann::json j = io::axiom_report_to_json(rep);
    CHECK(j["all_pass"] == true);
    CHECK(j["axioms"].size() == 7);
}

TEST_CASE("deterministic serialization: identical inputs give identical bytes") {
    auto U = dvr::build_dvr_universe(2, 2);
    std::string a = io::universe_to_json(U).dump(2);
    auto U2 = dvr::build_dvr_universe(2, 2);
    std::string b = io::universe_to_json(U2).dump(2);
    CHECK(a == b);
    eno::ARModel m1 = eno::a3_model(), m2 = eno::a3_model();
    CHECK(eno::model_to_json(m1).dump() == eno::model_to_json(m2).dump());
}
