// exact-lattice: batch interface over the desk models. Subcommand per module,
// JSON-first output with deterministic key order, exit code 0 on success,
// 1 on verification failure (with a machine-readable witness), 2 on usage
// errors.

#include "exlat/dvr_universe.hpp"
#include "exlat/enomoto.hpp"
#include "exlat/functor_exact.hpp"
#include "exlat/kronecker.hpp"
#include "exlat/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

using nlohmann::json;
using namespace exlat;

namespace {

struct GlobalOpts {
    int64_t p = 2;
    int64_t q = 5;
    int N = 5;
    int dim_bound = 6;
    int window = 4;
    uint64_t seed = 0;
    int jobs = 1;
    std::string format = "json";
    std::string out;
};

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',' || c == ';') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

kron::IndecLabel parse_klabel(const std::string& s) {
    if (s.empty()) throw CLI::ValidationError("label", "empty label");
    if (s[0] == 'P') return {kron::IndecLabel::Kind::Preproj, std::stoi(s.substr(1)), 0, 1};
    if (s[0] == 'Q') return {kron::IndecLabel::Kind::Preinj, std::stoi(s.substr(1)), 0, 1};
    if (s[0] == 'S') {
        auto br = s.find('[');
        if (br == std::string::npos || s.back() != ']')
            throw CLI::ValidationError("label", "regular labels look like S0[2]");
        int lam = std::stoi(s.substr(1, br - 1));
        int k = std::stoi(s.substr(br + 1, s.size() - br - 2));
        return {kron::IndecLabel::Kind::Regular, 0, lam, k};
    }
    throw CLI::ValidationError("label", "labels look like P2, Q0 or S3[2]");
}

json shape_json(const dvr::GroupShape& g, int64_t p) {
    json orders = json::array();
    for (int e : g.torsion_exps) {
        int64_t o = 1;
        for (int i = 0; i < e; ++i) o *= p;
        orders.push_back(o);
    }
    return json{{"cyclic_orders", orders},
                {"torsion_exponents", g.torsion_exps},
                {"free_rank", g.free_rank}};
}

json closed_set_json(const dvr::ClosedSet& u) {
    return json{{"finite", std::vector<int>(u.finite.begin(), u.finite.end())},
                {"adic", u.adic}};
}

void emit(const GlobalOpts& g, json report, int exit_code_hint = 0) {
    std::string text;
    if (g.format == "json") text = report.dump(2) + "\n";
    else if (g.format == "text" || g.format == "csv") {
        // text/csv fall back to a flat rendering of the result object
        std::ostringstream os;
        if (report.contains("result")) {
            const json& r = report["result"];
            std::function<void(const std::string&, const json&)> walk =
                [&](const std::string& prefix, const json& v) {
                    if (v.is_object()) {
                        for (auto it = v.begin(); it != v.end(); ++it)
                            walk(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
                    } else {
                        os << prefix << (g.format == "csv" ? "," : ": ") << v.dump() << "\n";
                    }
                };
            walk("", r);
        } else {
            os << report.dump(2) << "\n";
        }
        text = os.str();
    }
    if (!g.out.empty()) {
        std::ofstream f(g.out);
        f << text;
    } else {
        std::cout << text;
    }
    (void)exit_code_hint;
}

json base_report(const GlobalOpts& g, const std::string& command) {
    return json{{"tool", "exact-lattice"},
                {"version", "1.0.0"},
                {"command", command},
                {"config", json{{"p", g.p},
                                {"q", g.q},
                                {"N", g.N},
                                {"dim_bound", g.dim_bound},
                                {"window", g.window},
                                {"seed", g.seed},
                                {"jobs", g.jobs}}}};
}

std::string typeI_cell_name(int cls, int lam) {
    if (cls == 0) return "P";
    if (cls == 2) return "Q";
    return "R" + std::to_string(lam);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact substructures via the Ziegler spectrum: desk models"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--p", g.p, "prime for the DVR model (default 2)");
    app.add_option("--q", g.q, "prime field size for the Kronecker model (default 5)");
    app.add_option("--N", g.N, "truncation bound of the DVR Ziegler space (default 5)");
    app.add_option("--dim-bound", g.dim_bound, "representative dimension bound (default 6)");
    app.add_option("--window", g.window, "stabilization window for tube towers (default 4)");
    app.add_option("--seed", g.seed, "seed for randomized cross-checks");
    app.add_option("--jobs", g.jobs, "parallel jobs for verification suites");
    app.add_option("--format", g.format, "output format: json|text|csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    app.add_option("--out", g.out, "write the report to a file");

    // ---------------------------------------------------------------- dvr --
    auto* dvrc = app.add_subcommand("dvr", "discrete valuation ring model");
    dvrc->require_subcommand(1);
    int opt_m = 3, opt_l = 2, opt_n = 1, opt_a = 0;
    bool opt_free = false, opt_adic = false, opt_tail = false, opt_roundtrip = false;
    std::string opt_L = "1", opt_points = "";

    auto* dvr_ext = dvrc->add_subcommand("ext", "Ext^1(R/P^m, R/P^l) (or target R)");
    dvr_ext->add_option("--m", opt_m);
    dvr_ext->add_option("--l", opt_l);
    dvr_ext->add_flag("--free", opt_free, "target R instead of R/P^l");

    auto* dvr_rad = dvrc->add_subcommand("rad", "rad^n Ext^1 with generator labels");
    dvr_rad->add_option("--n", opt_n);
    dvr_rad->add_option("--m", opt_m);
    dvr_rad->add_option("--l", opt_l);
    dvr_rad->add_flag("--free", opt_free);

    auto* dvr_mem = dvrc->add_subcommand("membership", "is sigma_a in E_L (and E'_L)?");
    dvr_mem->add_option("--m", opt_m);
    dvr_mem->add_option("--l", opt_l);
    dvr_mem->add_flag("--free", opt_free);
    dvr_mem->add_option("--a", opt_a);
    dvr_mem->add_option("--L", opt_L, "exponent set, e.g. 1,3");
    dvr_mem->add_flag("--adic", opt_adic, "also require the torsion-functor test");

    dvrc->add_subcommand("closed-sets", "closed subsets of the truncated space");

    auto* dvr_clo = dvrc->add_subcommand("closure", "closure of a point set");
    dvr_clo->add_option("--points", opt_points, "finite-length points, e.g. 1,3");
    dvr_clo->add_flag("--adic", opt_adic);
    dvr_clo->add_flag("--infinite-tail", opt_tail);
    dvr_clo->add_flag("--roundtrip", opt_roundtrip,
                      "compute through the bijection on the pool (slower)");

    auto* dvr_gld = dvrc->add_subcommand("gldim", "global dimension of E_L / E'_L");
    dvr_gld->add_option("--L", opt_L);
    dvr_gld->add_flag("--adic", opt_adic);
    dvr_gld->add_flag("--infinite-tail", opt_tail);

    dvrc->add_subcommand("lattice", "the truncated lattice with global dimensions");

    // ----------------------------------------------------------- dedekind --
    auto* ded = app.add_subcommand("dedekind", "Dedekind model (Z, finite prime support)");
    ded->require_subcommand(1);
    std::string opt_support = "2,3", opt_x = "2:2", opt_y = "2:3", opt_M = "", opt_primes = "2,3";
    int opt_xrank = 0, opt_yrank = 0;
    auto* ded_ext = ded->add_subcommand("ext", "Ext decomposition by primes");
    ded_ext->add_option("--support", opt_support, "prime support, e.g. 2,3");
    ded_ext->add_option("--x", opt_x, "X torsion: prime:exps;prime:exps (e.g. 2:2,1;3:2)");
    ded_ext->add_option("--xrank", opt_xrank);
    ded_ext->add_option("--y", opt_y);
    ded_ext->add_option("--yrank", opt_yrank);
    ded_ext->add_option("--M", opt_M, "radical data prime:n;prime:n");
    auto* ded_cs = ded->add_subcommand("closed-sets", "closed sets over a prime support");
    ded_cs->add_option("--primes", opt_primes);

    // ---------------------------------------------------------- kronecker --
    auto* kr = app.add_subcommand("kronecker", "Kronecker quiver model");
    kr->require_subcommand(1);
    std::string opt_xlab = "P0", opt_ylab = "P1", opt_struct = "generic", opt_H = "Q0,Q1,Q3",
                opt_probe = "Q4", opt_fin = "", opt_T = "", opt_Mset = "", opt_tubes_inf = "";
    int opt_lambda = 0, opt_bound = 10, opt_ppmax = 2, opt_tubemax = 2;
    bool opt_ppinf = false, opt_piinf = false, opt_generic = false;
    auto* kr_ind = kr->add_subcommand("indec", "build and certify an indecomposable");
    kr_ind->add_option("--label", opt_xlab, "P2, Q0 or S3[2]");
    auto* kr_hom = kr->add_subcommand("hom", "Hom dimension");
    kr_hom->add_option("--x", opt_xlab);
    kr_hom->add_option("--y", opt_ylab);
    auto* kr_ext = kr->add_subcommand("ext", "Ext dimension (dual-route checked)");
    kr_ext->add_option("--x", opt_xlab);
    kr_ext->add_option("--y", opt_ylab);
    auto* kr_cc = kr->add_subcommand("closed-check", "Ringel closedness rules");
    kr_cc->add_option("--fin", opt_fin, "explicit finite-dimensional points");
    kr_cc->add_flag("--pp-infinite", opt_ppinf);
    kr_cc->add_flag("--pi-infinite", opt_piinf);
    kr_cc->add_option("--tubes-infinite", opt_tubes_inf, "lambdas, e.g. 0,2");
    kr_cc->add_option("--T", opt_T, "Pruefer subset of Omega");
    kr_cc->add_option("--M", opt_Mset, "adic subset of Omega");
    kr_cc->add_flag("--generic", opt_generic);
    auto* kr_tab = kr->add_subcommand("ext-table", "type (I) Ext table");
    kr_tab->add_option("--structure", opt_struct,
                       "generic|adic|pruefer|all-adic|all-pruefer|all-both");
    kr_tab->add_option("--lambda", opt_lambda);
    kr_tab->add_option("--pp-max", opt_ppmax);
    kr_tab->add_option("--tube-max", opt_tubemax);
    auto* kr_gw = kr->add_subcommand("gldim-witness", "2-extension witness");
    kr_gw->add_option("--structure", opt_struct);
    kr_gw->add_option("--lambda", opt_lambda);
    auto* kr_t2 = kr->add_subcommand("typeII", "Auslander-Solberg structure probes");
    kr_t2->add_option("--H", opt_H, "cogenerator labels, e.g. Q0,Q1,Q3");
    kr_t2->add_option("--probe", opt_probe);
    kr_t2->add_option("--bound", opt_bound);

    // ------------------------------------------------------------ enomoto --
    auto* en = app.add_subcommand("enomoto", "representation-finite classification");
    en->require_subcommand(1);
    std::string opt_model = "a3", opt_model_file = "";
    bool opt_dot = false;
    auto* en_enum = en->add_subcommand("enumerate", "the Boolean lattice of generators");
    en_enum->add_option("--model", opt_model, "a3|a2");
    en_enum->add_option("--file", opt_model_file, "AR model JSON file");
    auto* en_cls = en->add_subcommand("classify", "global dimension per structure");
    en_cls->add_option("--model", opt_model);
    en_cls->add_option("--file", opt_model_file);
    en_cls->add_flag("--dot", opt_dot, "also emit the lattice as DOT");

    // ------------------------------------------------------------ functor --
    auto* fu = app.add_subcommand("functor", "exact structures from additive functors");
    fu->require_subcommand(1);
    std::string opt_functor = "torsion";
    int opt_expmax = 3, opt_rankmax = 2;
    auto* fu_ind = fu->add_subcommand("induce", "S_f with the closure criterion");
    fu_ind->add_option("--functor", opt_functor, "torsion|free-quotient|identity");
    fu_ind->add_option("--expmax", opt_expmax);
    fu_ind->add_option("--rankmax", opt_rankmax);
    auto* fu_tor = fu->add_subcommand("torsion", "torsion pair checks and B_t");
    fu_tor->add_option("--expmax", opt_expmax);
    fu_tor->add_option("--rankmax", opt_rankmax);
    auto* fu_gl = fu->add_subcommand("gldim-identity", "gldim B_t = max(gldim T, gldim F)");
    fu_gl->add_option("--expmax", opt_expmax);
    fu_gl->add_option("--rankmax", opt_rankmax);

    // ------------------------------------------------------------- verify --
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string opt_suite = "all";
    ver->add_option("--suite", opt_suite, "dvr|kronecker|enomoto|lattice|functor|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    int exit_code = 0;
    try {
        PCtx R(g.p, 52);
        if (dvr_ext->parsed()) {
            json rep = base_report(g, "dvr ext");
            auto shape = dvr::ext_group(R, dvr::mod_cyclic(opt_m),
                                        opt_free ? dvr::mod_free(1) : dvr::mod_cyclic(opt_l));
            rep["result"] = shape_json(shape, g.p);
            emit(g, rep);
        } else if (dvr_rad->parsed()) {
            json rep = base_report(g, "dvr rad");
            auto rad = dvr::rad_ext(R, opt_n, opt_m, opt_free ? dvr::kFree : opt_l);
            json labels = json::array();
            for (auto& lab : rad.labels)
                labels.push_back(json{{"a", lab.a}, {"split", lab.is_split()}});
            rep["result"] = json{{"shape", shape_json(rad.shape, g.p)},
                                 {"generator_a", rad.generator ? json(rad.generator->a) : json()},
                                 {"labels", labels}};
            emit(g, rep);
        } else if (dvr_mem->parsed()) {
            json rep = base_report(g, "dvr membership");
            dvr::ExtLabel lab{opt_m, opt_free ? dvr::kFree : opt_l, opt_a};
            dvr::Ses s = dvr::realize_label(R, lab);
            auto Lv = parse_ints(opt_L);
            std::set<int> L(Lv.begin(), Lv.end());
            bool in_el = dvr::is_exact_EL(R, s, L);
            bool in_ep = dvr::is_exact_Eprime(R, s);
            rep["result"] = json{{"label_a", opt_a},
                                 {"middle", dvr::mod_name(s.B())},
                                 {"in_E_L", in_el},
                                 {"in_Eprime", in_ep},
                                 {"member", opt_adic ? (in_el && in_ep) : in_el}};
            emit(g, rep);
        } else if (dvrc->get_subcommand("closed-sets")->parsed()) {
            json rep = base_report(g, "dvr closed-sets");
            json sets = json::array();
            for (auto& u : dvr::classify_closed_sets(g.N)) sets.push_back(closed_set_json(u));
            rep["result"] = json{{"count", sets.size()}, {"closed_sets", sets}};
            emit(g, rep);
        } else if (dvr_clo->parsed()) {
            json rep = base_report(g, "dvr closure");
            auto pts = parse_ints(opt_points);
            std::set<int> S(pts.begin(), pts.end());
            dvr::ClosedSet cl;
            if (opt_roundtrip) {
                const auto& U = dvr::build_dvr_universe(g.p, g.N);
                cl = dvr::closure_roundtrip(U, S, opt_adic, opt_tail);
            } else {
                cl = dvr::closure_symbolic(S, opt_adic, opt_tail, g.N);
            }
            rep["result"] = closed_set_json(cl);
            emit(g, rep);
        } else if (dvr_gld->parsed()) {
            json rep = base_report(g, "dvr gldim");
            auto Lv = parse_ints(opt_L);
            dvr::ExponentSet L{std::set<int>(Lv.begin(), Lv.end()), opt_tail};
            auto gd = dvr::gldim_EL(R, L, opt_adic, g.N);
            if (std::holds_alternative<int>(gd)) {
                rep["result"] = json{{"gldim", std::get<int>(gd)}};
            } else {
                const auto& w = std::get<dvr::GldimInfinite>(gd);
                json steps = json::array();
                for (auto& st : w.witness.steps)
                    steps.push_back(json{{"A", dvr::mod_name(st.A())},
                                         {"B", dvr::mod_name(st.B())},
                                         {"C", dvr::mod_name(st.C())}});
                rep["result"] = json{{"gldim", "infinite"},
                                     {"witness", json{{"s", w.witness.s_exp},
                                                      {"period", w.witness.period},
                                                      {"steps", steps}}}};
            }
            emit(g, rep);
        } else if (dvrc->get_subcommand("lattice")->parsed()) {
            json rep = base_report(g, "dvr lattice");
            json nodes = json::array();
            for (auto& u : dvr::classify_closed_sets(g.N)) {
                dvr::ExponentSet L{u.finite, false};
                auto gd = dvr::gldim_EL(R, L, u.adic, g.N);
                json node = closed_set_json(u);
                node["gldim"] = std::holds_alternative<int>(gd)
                                    ? json(std::get<int>(gd))
                                    : json("infinite");
                nodes.push_back(node);
            }
            rep["result"] = json{{"count", nodes.size()}, {"structures", nodes}};
            emit(g, rep);
        } else if (ded_ext->parsed()) {
            json rep = base_report(g, "dedekind ext");
            auto parse_module = [](const std::string& s, int rank) {
                dvr::DedekindModule m;
                m.free_rank = rank;
                std::string cur;
                for (char c : s + ";") {
                    if (c == ';') {
                        if (!cur.empty()) {
                            auto colon = cur.find(':');
                            int64_t p = std::stoll(cur.substr(0, colon));
                            m.parts[p] = dvr::make_mod(parse_ints(cur.substr(colon + 1)), 0);
                        }
                        cur.clear();
                    } else {
                        cur += c;
                    }
                }
                return m;
            };
            std::vector<int64_t> support;
            for (int x : parse_ints(opt_support)) support.push_back(x);
            std::map<int64_t, int> M;
            if (!opt_M.empty()) {
                std::string cur;
                for (char c : opt_M + ";") {
                    if (c == ';') {
                        if (!cur.empty()) {
                            auto colon = cur.find(':');
                            M[std::stoll(cur.substr(0, colon))] = std::stoi(cur.substr(colon + 1));
                        }
                        cur.clear();
                    } else {
                        cur += c;
                    }
                }
            }
            auto comps = dvr::dedekind_ext_decompose(support, parse_module(opt_x, opt_xrank),
                                                     parse_module(opt_y, opt_yrank), M);
            json arr = json::array();
            for (auto& c : comps)
                arr.push_back(json{{"prime", c.prime},
                                   {"full", shape_json(c.full, c.prime)},
                                   {"component", shape_json(c.component, c.prime)},
                                   {"in_M", c.in_M},
                                   {"n", c.n_P}});
            rep["result"] = json{{"components", arr}};
            emit(g, rep);
        } else if (ded_cs->parsed()) {
            json rep = base_report(g, "dedekind closed-sets");
            std::vector<int64_t> primes;
            for (int x : parse_ints(opt_primes)) primes.push_back(x);
            auto sets = dvr::dedekind_classify_closed(primes, g.N > 2 ? 2 : g.N);
            json arr = json::array();
            for (auto& u : sets) {
                json fin = json::object();
                for (auto& [p, exps] : u.finite)
                    fin[std::to_string(p)] = std::vector<int>(exps.begin(), exps.end());
                arr.push_back(json{{"finite", fin},
                                   {"adic_primes", std::vector<int64_t>(u.adic.begin(),
                                                                        u.adic.end())}});
            }
            rep["result"] = json{{"count", arr.size()}, {"closed_sets", arr}};
            emit(g, rep);
        } else if (kr_ind->parsed()) {
            json rep = base_report(g, "kronecker indec");
            kron::KCat cat{FqField(g.q)};
            auto lab = cat.certify_indec(parse_klabel(opt_xlab));
            auto dims = kron::label_dims(lab);
            rep["result"] = json{{"label", kron::label_name(lab)},
                                 {"dims", {dims.first, dims.second}},
                                 {"end_local", true}};
            emit(g, rep);
        } else if (kr_hom->parsed() || kr_ext->parsed()) {
            bool ext = kr_ext->parsed();
            json rep = base_report(g, ext ? "kronecker ext" : "kronecker hom");
            kron::KCat cat{FqField(g.q)};
            auto X = cat.rep(parse_klabel(opt_xlab)), Y = cat.rep(parse_klabel(opt_ylab));
            int d = ext ? cat.ext_dim(X, Y) : cat.hom_dim(X, Y);
            rep["result"] = json{{"x", opt_xlab}, {"y", opt_ylab}, {"dim", d}};
            if (ext)
                rep["result"]["euler"] = kron::euler({X.d1, X.d2}, {Y.d1, Y.d2});
            emit(g, rep);
        } else if (kr_cc->parsed()) {
            json rep = base_report(g, "kronecker closed-check");
            kron::KCat cat{FqField(g.q)};
            kron::KClosedSetDescr u;
            if (!opt_fin.empty()) {
                std::string cur;
                for (char c : opt_fin + ",") {
                    if (c == ',') {
                        if (!cur.empty()) u.fin.push_back(parse_klabel(cur));
                        cur.clear();
                    } else {
                        cur += c;
                    }
                }
            }
            u.pp_infinite = opt_ppinf;
            u.pi_infinite = opt_piinf;
            for (int l : parse_ints(opt_tubes_inf)) u.tubes_infinite.insert(l);
            for (int l : parse_ints(opt_T)) u.T.insert(l);
            for (int l : parse_ints(opt_Mset)) u.M.insert(l);
            u.generic = opt_generic;
            auto viols = kron::ziegler_closed_violations(cat, u);
            json varr = json::array();
            for (auto& v : viols) varr.push_back(json{{"rule", v.rule}, {"witness", v.witness}});
            auto cl = kron::ziegler_closure(cat, u);
            rep["result"] = json{
                {"closed", viols.empty()},
                {"violations", varr},
                {"closure",
                 json{{"generic", cl.generic},
                      {"T", std::vector<int>(cl.T.begin(), cl.T.end())},
                      {"M", std::vector<int>(cl.M.begin(), cl.M.end())}}}};
            emit(g, rep);
        } else if (kr_tab->parsed() || kr_gw->parsed()) {
            kron::KCat cat{FqField(g.q)};
            kron::TypeISpec spec;
            if (opt_struct == "generic") spec.kind = kron::TypeISpec::Kind::Generic;
            else if (opt_struct == "adic") spec.kind = kron::TypeISpec::Kind::Adic;
            else if (opt_struct == "pruefer") spec.kind = kron::TypeISpec::Kind::Pruefer;
            else if (opt_struct == "all-adic") spec.kind = kron::TypeISpec::Kind::AllAdic;
            else if (opt_struct == "all-pruefer") spec.kind = kron::TypeISpec::Kind::AllPruefer;
            else if (opt_struct == "all-both") spec.kind = kron::TypeISpec::Kind::AllBoth;
            else throw CLI::ValidationError("--structure", "unknown structure");
            spec.lambda = opt_lambda;
            if (kr_tab->parsed()) {
                json rep = base_report(g, "kronecker ext-table");
                auto table = kron::typeI_ext_table(cat, spec, opt_ppmax, opt_tubemax, g.window);
                json cells = json::object();
                std::ostringstream aligned;
                for (auto& [key, val] : table.cells) {
                    auto [xc, xl, yc, yl] = key;
                    std::string nm = typeI_cell_name(xc, xl) + "," + typeI_cell_name(yc, yl);
                    std::string v = val == kron::TypeICell::Value::Full   ? "full"
                                    : val == kron::TypeICell::Value::Zero ? "zero"
                                                                          : "mixed";
                    cells[nm] = v;
                    aligned << nm << std::string(nm.size() < 8 ? 8 - nm.size() : 1, ' ') << v
                            << "\n";
                }
                rep["result"] = json{{"cells", cells},
                                     {"stabilization_failures", table.stabilization_failures},
                                     {"aligned_text", aligned.str()}};
                emit(g, rep);
                if (table.stabilization_failures > 0) exit_code = 1;
            } else {
                json rep = base_report(g, "kronecker gldim-witness");
                auto w = kron::gldim2_witness(cat, spec, g.window);
                if (std::holds_alternative<kron::StabilizationFailure>(w)) {
                    rep["result"] =
                        json{{"error", std::get<kron::StabilizationFailure>(w).what}};
                    exit_code = 1;
                } else {
                    auto& ww = std::get<kron::Gldim2Witness>(w);
                    rep["result"] = json{{"mu", ww.mu},
                                         {"halves_in_structure", ww.halves_in_structure},
                                         {"splice_nonzero", ww.splice_nonzero}};
                    if (!ww.halves_in_structure || !ww.splice_nonzero) exit_code = 1;
                }
                emit(g, rep);
            }
        } else if (kr_t2->parsed()) {
            json rep = base_report(g, "kronecker typeII");
            kron::KCat cat{FqField(g.q)};
            std::vector<kron::IndecLabel> H;
            std::string cur;
            for (char c : opt_H + ",") {
                if (c == ',') {
                    if (!cur.empty()) H.push_back(parse_klabel(cur));
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            auto res = kron::typeII_idim(cat, H, parse_klabel(opt_probe), opt_bound);
            json terms = json::array();
            for (auto& t : res.injective_terms) {
                json tt = json::array();
                for (auto& l : t) tt.push_back(kron::label_name(l));
                terms.push_back(tt);
            }
            std::string status = res.status == kron::TypeIICoresolution::Status::Terminated
                                     ? "terminated"
                                     : res.status == kron::TypeIICoresolution::Status::Periodic
                                           ? "periodic"
                                           : "exceeded-bound";
            rep["result"] = json{{"status", status},
                                 {"idim", status == "terminated" ? json(res.idim) : json("infinite")},
                                 {"period", res.period},
                                 {"injective_terms", terms}};
            emit(g, rep);
        } else if (en_enum->parsed() || en_cls->parsed()) {
            eno::ARModel m = [&]() {
                if (!opt_model_file.empty()) {
                    std::ifstream f(opt_model_file);
                    if (!f) throw CLI::ValidationError("--file", "cannot open model file");
                    json j;
                    f >> j;
                    return eno::model_from_json(j, g.q);
                }
                if (opt_model == "a3") return eno::a3_model();
                if (opt_model == "a2") return eno::a2_model();
                throw CLI::ValidationError("--model", "unknown model (a3|a2)");
            }();
            if (en_enum->parsed()) {
                json rep = base_report(g, "enomoto enumerate");
                json gens = json::array();
                for (auto& gg : eno::enumerate_generators(m)) {
                    json names = json::array();
                    for (auto iv : gg) names.push_back(m.indec_names[m.index_of(iv)]);
                    gens.push_back(names);
                }
                rep["result"] = json{{"model", m.name},
                                     {"count", gens.size()},
                                     {"generators", gens},
                                     {"model_data", eno::model_to_json(m)}};
                emit(g, rep);
            } else {
                json rep = base_report(g, "enomoto classify");
                auto nodes = eno::classify_by_gldim(m);
                int hereditary = 0, round = 0;
                for (auto& n : nodes) {
                    if (std::holds_alternative<int>(n.gldim) && std::get<int>(n.gldim) <= 1)
                        ++hereditary;
                    if (n.round_trip_ok) ++round;
                }
                rep["result"] = eno::lattice_json(m, nodes);
                rep["result"]["hereditary_count"] = hereditary;
                rep["result"]["round_trips"] = round;
                if (opt_dot) rep["result"]["dot"] = eno::lattice_dot(m, nodes);
                emit(g, rep);
                if (round != (int)nodes.size()) exit_code = 1;
            }
        } else if (fu_ind->parsed() || fu_tor->parsed() || fu_gl->parsed()) {
            if (fu_gl->parsed()) {
                json rep = base_report(g, "functor gldim-identity");
                auto res = fx::gldim_torsion_identity(g.p, opt_expmax, opt_rankmax, 8);
                auto gj = [](const core::GldimResult& r) {
                    if (std::holds_alternative<int>(r)) return json(std::get<int>(r));
                    if (std::holds_alternative<core::GldimInfiniteW>(r)) return json("infinite");
                    return json("undetermined");
                };
                rep["result"] = json{{"gldim_Bt", gj(res.bt)},
                                     {"gldim_T", gj(res.torsion)},
                                     {"gldim_F", gj(res.free)},
                                     {"equality", res.equality},
                                     {"ext1_witness", res.ext1_witness},
                                     {"ext2_vanishes", res.ext2.vanishes},
                                     {"ext2_checked", res.ext2.checked}};
                emit(g, rep);
                if (!res.equality || !res.ext2.vanishes) exit_code = 1;
            } else {
                auto U = core::build_universe(dvr::make_zmod_backend(g.p, opt_expmax, opt_rankmax));
                if (fu_tor->parsed()) {
                    json rep = base_report(g, "functor torsion");
                    auto pair = fx::torsion_pair_checks(U);
                    auto bt = fx::torsion_structure(U, pair);
                    rep["result"] = json{{"hom_TF_zero", pair.hom_tf_zero},
                                         {"idempotent", pair.idempotent},
                                         {"hereditary", pair.hereditary},
                                         {"accepted", std::holds_alternative<fx::DvrStructure>(bt)}};
                    emit(g, rep);
                    if (!std::holds_alternative<fx::DvrStructure>(bt)) exit_code = 1;
                } else {
                    json rep = base_report(g, "functor induce");
                    fx::DvrFunctor f = opt_functor == "torsion"
                                           ? fx::torsion_functor(U.bk.R)
                                           : opt_functor == "free-quotient"
                                                 ? fx::free_quotient_functor(U.bk.R)
                                                 : fx::identity_functor();
                    fx::DvrStructure Emax;
                    Emax.name = "abelian";
                    Emax.member = [](const dvr::Ses&) { return true; };
                    bool functorial = fx::check_functoriality(U, f);
                    auto cls = fx::certify_exactness(U, f);
                    std::string cname = cls == fx::ExactnessClass::Exact       ? "exact"
                                        : cls == fx::ExactnessClass::LeftExact ? "left-exact"
                                        : cls == fx::ExactnessClass::RightExact
                                            ? "right-exact"
                                            : "unknown";
                    auto sf = fx::induced_structure(U, f, Emax, Emax);
                    json res = json{{"functor", f.name},
                                    {"functorial", functorial},
                                    {"exactness_class", cname}};
                    if (std::holds_alternative<fx::DvrStructure>(sf)) {
                        res["valid"] = true;
                        res["name"] = std::get<fx::DvrStructure>(sf).name;
                    } else {
                        res["valid"] = false;
                        res["witness"] = std::get<fx::InvalidWitness>(sf).what;
                        exit_code = 1;
                    }
                    rep["result"] = res;
                    emit(g, rep);
                }
            }
        } else if (ver->parsed()) {
            json rep = base_report(g, "verify");
            verify::Config cfg;
            cfg.p = g.p;
            cfg.q = g.q;
            cfg.N = g.N;
            cfg.dim_bound = g.dim_bound;
            cfg.window = g.window;
            cfg.seed = g.seed;
            cfg.jobs = g.jobs;
            auto results = verify::run_suite(opt_suite, cfg);
            int pass = 0, fail = 0;
            json arr = json::array();
            for (auto& r : results) {
                (r.pass ? pass : fail)++;
                arr.push_back(json{{"criterion", r.id},
                                   {"name", r.name},
                                   {"pass", r.pass},
                                   {"detail", r.detail}});
                std::cerr << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.id << " ("
                          << r.seconds << "s): " << r.detail << "\n";
            }
            rep["result"] = json{{"suite", opt_suite}, {"criteria", arr}};
            rep["verification"] = json{{"pass", pass}, {"fail", fail}};
            emit(g, rep);
            if (fail > 0) exit_code = 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    auto t1 = std::chrono::steady_clock::now();
    std::cerr << "elapsed: " << std::chrono::duration<double>(t1 - t0).count() << "s\n";
    return exit_code;
}
