#include "exlat/enomoto.hpp"

#include <algorithm>
#include <stdexcept>

namespace exlat::eno {

int ARModel::index_of(Interval iv) const {
    for (size_t i = 0; i < indecs.size(); ++i)
        if (indecs[i] == iv) return (int)i;
    return -1;
}

namespace {

ARModel build_model(std::string name, int64_t q, int n,
                    std::vector<std::pair<Interval, std::string>> indecs,
                    std::vector<std::pair<Interval, Interval>> ar_ends) {
    ARModel m;
    m.name = std::move(name);
    m.bk = anq::make_an_backend(q, n);
    for (auto& [iv, nm] : indecs) {
        m.indecs.push_back(iv);
        m.indec_names.push_back(nm);
    }
    size_t k = m.indecs.size();
    m.projective.assign(k, 0);
    m.injective.assign(k, 0);
    m.hom_dims.assign(k, std::vector<int>(k, 0));
    m.ext_dims.assign(k, std::vector<int>(k, 0));
    const auto& cat = m.bk.cat;
    for (size_t i = 0; i < k; ++i) {
        // projectives are [a, n], injectives [1, b]
        if (m.indecs[i].second == n) m.projective[i] = 1;
        if (m.indecs[i].first == 1) m.injective[i] = 1;
        for (size_t j = 0; j < k; ++j) {
            anq::AnRep X = cat.interval_rep(m.indecs[i]);
            anq::AnRep Y = cat.interval_rep(m.indecs[j]);
            m.hom_dims[i][j] = cat.hom_dim(X, Y);
            m.ext_dims[i][j] = cat.ext_pres(X, Y).dim; // Ext^1(indec_i, indec_j)
        }
    }
    for (auto& [c, a] : ar_ends) {
        // the almost split sequence ending at c (starting at a = tau c)
        auto P = m.bk.cat.ext_pres(m.bk.cat.interval_rep(c), m.bk.cat.interval_rep(a));
        if (P.dim != 1) throw std::logic_error("build_model: AR ext space is not 1-dim");
        auto s = m.bk.realize(Intervals{c}, Intervals{a}, {1});
        if (!s) throw std::logic_error("build_model: AR sequence failed to realize");
        m.ar_sequences.push_back(*s);
    }
    certify_model(m);
    return m;
}

} // namespace

ARModel a3_model(int64_t q) {
    return build_model("a3", q, 3,
                       {{{1, 3}, "P1"},
                        {{2, 3}, "P2"},
                        {{3, 3}, "P3"},
                        {{2, 2}, "S2"},
                        {{1, 2}, "I2"},
                        {{1, 1}, "I1"}},
                       // (end, start) = (C, tau C) per dashed translate
                       {{{2, 2}, {3, 3}}, {{1, 2}, {2, 3}}, {{1, 1}, {2, 2}}});
}

ARModel a2_model(int64_t q) {
    return build_model("a2", q, 2,
                       {{{1, 2}, "P1"}, {{2, 2}, "P2"}, {{1, 1}, "S1"}},
                       {{{1, 1}, {2, 2}}});
}

void certify_model(const ARModel& m) {
    const auto& cat = m.bk.cat;
    size_t k = m.indecs.size();
    for (size_t i = 0; i < k; ++i) {
        anq::AnRep X = cat.interval_rep(m.indecs[i]);
        // tables re-derived from the engine
        for (size_t j = 0; j < k; ++j) {
            anq::AnRep Y = cat.interval_rep(m.indecs[j]);
            if (m.hom_dims[i][j] != cat.hom_dim(X, Y))
                throw std::logic_error("certify_model: hom table mismatch");
            if (m.ext_dims[i][j] != cat.ext_pres(X, Y).dim)
                throw std::logic_error("certify_model: ext table mismatch");
        }
        // flags: projective iff Ext^1(X, -) = 0, injective iff Ext^1(-, X) = 0
        bool proj = true, inj = true;
        for (size_t j = 0; j < k; ++j) {
            if (m.ext_dims[i][j] != 0) proj = false;
            if (m.ext_dims[j][i] != 0) inj = false;
        }
        if ((bool)m.projective[i] != proj)
            throw std::logic_error("certify_model: projective flag mismatch");
        if ((bool)m.injective[i] != inj)
            throw std::logic_error("certify_model: injective flag mismatch");
    }
    // AR sequence count = number of non-projectives; each certified non-split
    size_t nonproj = 0;
    for (char p : m.projective)
        if (!p) nonproj++;
    if (m.ar_sequences.size() != nonproj)
        throw std::logic_error("certify_model: AR sequence count mismatch");
    for (const auto& s : m.ar_sequences) {
        // re-certify through make_ses and check non-splitness
        m.bk.make_ses(s.a, s.b, s.c, s.i, s.d);
        auto z = m.bk.extract(s);
        bool zero = true;
        for (auto x : z)
            if (x % m.bk.cat.F.q != 0) zero = false;
        if (zero) throw std::logic_error("certify_model: AR sequence splits");
    }
}

nlohmann::json model_to_json(const ARModel& m) {
    nlohmann::json j;
    j["name"] = m.name;
    j["n"] = m.bk.cat.n;
    j["q"] = m.bk.cat.F.q;
    nlohmann::json indecs = nlohmann::json::array();
    for (size_t i = 0; i < m.indecs.size(); ++i)
        indecs.push_back({{"name", m.indec_names[i]},
                          {"interval", {m.indecs[i].first, m.indecs[i].second}},
                          {"projective", (bool)m.projective[i]},
                          {"injective", (bool)m.injective[i]}});
    j["indecs"] = indecs;
    j["homs"] = m.hom_dims;
    j["exts"] = m.ext_dims;
    nlohmann::json ars = nlohmann::json::array();
    for (const auto& s : m.ar_sequences) {
        nlohmann::json e;
        e["A"] = s.a;
        e["B"] = s.b;
        e["C"] = s.c;
        ars.push_back(e);
    }
    j["ar_sequences"] = ars;
    return j;
}

ARModel model_from_json(const nlohmann::json& j, int64_t q) {
    std::vector<std::pair<Interval, std::string>> indecs;
    for (const auto& e : j.at("indecs"))
        indecs.push_back({{e.at("interval")[0], e.at("interval")[1]}, e.at("name")});
    // AR ends: (C, A) from the listed sequences
    std::vector<std::pair<Interval, Interval>> ar_ends;
    for (const auto& e : j.at("ar_sequences")) {
        auto cv = e.at("C").get<std::vector<std::vector<int>>>();
        auto av = e.at("A").get<std::vector<std::vector<int>>>();
        if (cv.size() != 1 || av.size() != 1)
            throw std::invalid_argument("model_from_json: AR ends must be indecomposable");
        ar_ends.push_back({{cv[0][0], cv[0][1]}, {av[0][0], av[0][1]}});
    }
    int64_t qq = j.contains("q") ? (int64_t)j.at("q") : q;
    ARModel m = build_model(j.at("name"), qq, j.at("n"), indecs, ar_ends);
    // cross-check the declared tables against the engine-derived ones
    if (j.at("homs").get<std::vector<std::vector<int>>>() != m.hom_dims)
        throw std::invalid_argument("model_from_json: hom table disagrees with the engine");
    if (j.at("exts").get<std::vector<std::vector<int>>>() != m.ext_dims)
        throw std::invalid_argument("model_from_json: ext table disagrees with the engine");
    return m;
}

std::vector<Generator> enumerate_generators(const ARModel& m) {
    std::vector<Interval> proj, nonproj;
    for (size_t i = 0; i < m.indecs.size(); ++i)
        (m.projective[i] ? proj : nonproj).push_back(m.indecs[i]);
    std::vector<Generator> out;
    for (int mask = 0; mask < (1 << nonproj.size()); ++mask) {
        Generator g = proj;
        for (size_t t = 0; t < nonproj.size(); ++t)
            if (mask & (1 << t)) g.push_back(nonproj[t]);
        std::sort(g.begin(), g.end());
        out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

core::Structure<AnBackend> structure_from_generator(const ARModel& m, const Generator& g) {
    return m.bk.structure_from_descriptor(g);
}

std::vector<Interval> structure_projectives(const ARModel& m,
                                            const core::Universe<AnBackend>& U,
                                            const core::Structure<AnBackend>& S) {
    core::Bitmap bm = core::compute_bitmap(U, S);
    std::vector<Interval> out;
    for (Interval x : m.indecs) {
        anq::AnRep RX = m.bk.cat.interval_rep(x);
        bool proj = true;
        for (size_t f = 0; f < U.families.size() && proj; ++f) {
            const auto& F = U.families[f];
            for (size_t c = 0; c < F.classes.size() && proj; ++c) {
                if (!bm[f][c] || !F.seqs[c]) continue;
                const auto& s = *F.seqs[c];
                // Hom(X, B) -> Hom(X, C) surjective?
                anq::AnRep RB = m.bk.cat.rep_of(s.b), RC = m.bk.cat.rep_of(s.c);
                int want = m.bk.cat.hom_dim(RX, RC);
                if (want == 0) continue;
                auto hb = m.bk.cat.hom_basis(RX, RB);
                int len = 0;
                for (int v = 0; v < m.bk.cat.n; ++v) len += RC.dims[v] * RX.dims[v];
                FqMat M = fmat_zero(m.bk.cat.F, std::max((int)hb.size(), 1), std::max(len, 1));
                for (size_t r = 0; r < hb.size(); ++r) {
                    auto comp = m.bk.cat.compose(RX, RB, RC, s.d, hb[r]);
                    int col = 0;
                    for (int v = 0; v < m.bk.cat.n; ++v)
                        for (int i = 0; i < RC.dims[v]; ++i)
                            for (int jj = 0; jj < RX.dims[v]; ++jj)
                                M.at((int)r, col++) = comp.comps[v].at(i, jj);
                }
                if (fmat_rank(m.bk.cat.F, M) != want) proj = false;
            }
        }
        if (proj) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ClassifiedStructure> classify_by_gldim(const ARModel& m) {
    core::Universe<AnBackend> U = core::build_universe(m.bk);
    std::vector<ClassifiedStructure> out;
    for (const Generator& g : enumerate_generators(m)) {
        ClassifiedStructure node;
        node.generator = g;
        auto S = structure_from_generator(m, g);
        node.gldim = core::gldim(U, S, 8, core::ApproxStrategy::ShapeSearch);
        auto projs = structure_projectives(m, U, S);
        node.round_trip_ok = (projs == g);
        out.push_back(node);
    }
    return out;
}

nlohmann::json lattice_json(const ARModel& m, const std::vector<ClassifiedStructure>& nodes) {
    nlohmann::json j;
    j["model"] = m.name;
    nlohmann::json ns = nlohmann::json::array();
    for (const auto& node : nodes) {
        nlohmann::json e;
        nlohmann::json gen = nlohmann::json::array();
        for (auto iv : node.generator) {
            int idx = m.index_of(iv);
            gen.push_back(idx >= 0 ? m.indec_names[idx] : "?");
        }
        e["generator"] = gen;
        if (std::holds_alternative<int>(node.gldim))
            e["gldim"] = std::get<int>(node.gldim);
        else if (std::holds_alternative<core::GldimInfiniteW>(node.gldim))
            e["gldim"] = "infinite";
        else
            e["gldim"] = "undetermined";
        e["round_trip"] = node.round_trip_ok;
        ns.push_back(e);
    }
    j["structures"] = ns;
    return j;
}

std::string lattice_dot(const ARModel& m, const std::vector<ClassifiedStructure>& nodes) {
    auto label = [&](const Generator& g) {
        std::string s;
        for (auto iv : g) {
            int idx = m.index_of(iv);
            if (!s.empty()) s += "+";
            s += idx >= 0 ? m.indec_names[idx] : "?";
        }
        return s;
    };
    std::string out = "digraph lattice {\n";
    for (size_t i = 0; i < nodes.size(); ++i) {
        std::string gd = std::holds_alternative<int>(nodes[i].gldim)
                             ? std::to_string(std::get<int>(nodes[i].gldim))
                             : std::string("inf");
        out += "  n" + std::to_string(i) + " [label=\"" + label(nodes[i].generator) +
               "\\ngldim " + gd + "\"];\n";
    }
    // Hasse edges of the generator inclusion order (structures reverse it)
    auto subset = [](const Generator& a, const Generator& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t j = 0; j < nodes.size(); ++j) {
            if (i == j) continue;
            if (!subset(nodes[i].generator, nodes[j].generator)) continue;
            if (nodes[j].generator.size() != nodes[i].generator.size() + 1) continue;
            out += "  n" + std::to_string(i) + " -> n" + std::to_string(j) + ";\n";
        }
    out += "}\n";
    return out;
}

} // namespace exlat::eno
