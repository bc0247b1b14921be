#include "exlat/json_io.hpp"

namespace exlat::io {

using nlohmann::json;
using namespace exlat::dvr;

static json mor_json(const PCtx& R, const Mor& f) {
    json rows = json::array();
    for (int i = 0; i < f.m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < f.m.cols; ++j) row.push_back(R.reduce(f.m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json universe_to_json(const DvrUniverse& U) {
    const PCtx& R = U.bk.R;
    json objects = json::array();
    std::vector<Mod> objs = U.bk.end_objects;
    for (const auto& o : U.bk.a_end_objects)
        if (std::find(objs.begin(), objs.end(), o) == objs.end()) objs.push_back(o);
    for (const auto& o : objs) {
        json summands = json::array();
        for (int e : o.exps) summands.push_back("R/P^" + std::to_string(e));
        for (int r = 0; r < o.free_rank; ++r) summands.push_back("R");
        objects.push_back(json{{"id", mod_name(o)}, {"summands", summands}});
    }
    json homs = json::array();
    for (const auto& a : objs)
        for (const auto& b : objs) {
            GroupShape sh = hom_group(R, a, b);
            json gens = json::array();
            for (const auto& blk : hom_blocks(R, a, b))
                gens.push_back(json{{"dst_summand", blk.dst_idx},
                                    {"src_summand", blk.src_idx},
                                    {"order_exponent", blk.ord_exp >= R.k ? -1 : blk.ord_exp},
                                    {"valuation", blk.min_val}});
            homs.push_back(json{{"src", mod_name(a)},
                                {"dst", mod_name(b)},
                                {"group", json{{"torsion_exponents", sh.torsion_exps},
                                               {"free_rank", sh.free_rank}}},
                                {"generators", gens}});
        }
    json ses = json::array();
    for (const auto& F : U.families) {
        if (F.oversize) continue;
        for (int rep : F.orbit_reps) {
            if (!F.seqs[rep]) continue;
            const Ses& s = *F.seqs[rep];
            ses.push_back(json{{"A", mod_name(s.A())},
                               {"B", mod_name(s.B())},
                               {"C", mod_name(s.C())},
                               {"i", mor_json(R, s.i)},
                               {"d", mor_json(R, s.d)}});
        }
    }
    return json{{"objects", objects}, {"homs", homs}, {"ses", ses}};
}

json axiom_report_to_json(const core::AxiomReport& rep) {
    json axioms = json::array();
    for (const auto& e : rep.entries)
        axioms.push_back(json{{"axiom", e.axiom},
                              {"checked", e.checked},
                              {"failures", e.failures},
                              {"untestable", e.untestable},
                              {"witness", e.witness}});
    return json{{"all_pass", rep.all_pass()}, {"axioms", axioms}};
}

} // namespace exlat::io
