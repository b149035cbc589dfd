#include "tessella/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace tessella {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

namespace {

std::string as_name(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw Error(ErrorKind::InvalidInput, "expected a name, got " + j.dump());
}

Rational as_rational(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw Error(ErrorKind::InvalidInput, "expected a coefficient, got " + j.dump());
}

Json rational_json(const Rational& q) {
    if (boost::multiprecision::denominator(q) == 1 && abs(q) < Rational(1LL << 52))
        return static_cast<long long>(boost::multiprecision::numerator(q));
    return format_rational(q);
}

Color parse_color(const Json& j) {
    std::string s = as_name(j);
    if (s == "b" || s == "black") return Color::Black;
    if (s == "w" || s == "white") return Color::White;
    throw Error(ErrorKind::InvalidInput, "unknown color " + s);
}

} // namespace

BraneTiling tiling_from_json(const Json& j) {
    try {
        std::vector<int> half_edges = j.at("half_edges").get<std::vector<int>>();
        const int n = static_cast<int>(half_edges.size());
        std::vector<char> present(n, 0);
        for (int h : half_edges) {
            if (h < 0 || h >= n || present[h])
                throw Error(ErrorKind::InvalidInput, "half_edges must list 0..N-1 exactly once");
            present[h] = 1;
        }
        std::vector<int> inv(n, -1);
        for (const auto& pair : j.at("involution")) {
            int a = pair.at(0).get<int>(), b = pair.at(1).get<int>();
            if (a < 0 || a >= n || b < 0 || b >= n) throw Error(ErrorKind::InvalidInput, "involution pair out of range");
            inv[a] = b;
            inv[b] = a;
        }
        for (int h = 0; h < n; ++h)
            if (inv[h] == -1) inv[h] = h; // reported as a fixed point by the map
        auto cycles = j.at("rotation").get<std::vector<std::vector<int>>>();
        BraneTiling t;
        t.map = CombinatorialMap(inv, cycles);
        t.coloring.assign(cycles.size(), Color::White);
        const Json& col = j.at("coloring");
        if (col.is_array()) {
            if (col.size() != cycles.size()) throw Error(ErrorKind::InvalidInput, "coloring size mismatch");
            for (std::size_t v = 0; v < col.size(); ++v) t.coloring[v] = parse_color(col[v]);
        } else {
            for (auto it = col.begin(); it != col.end(); ++it) {
                std::size_t v = std::stoul(it.key());
                if (v >= cycles.size()) throw Error(ErrorKind::InvalidInput, "coloring index out of range");
                t.coloring[v] = parse_color(it.value());
            }
        }
        if (j.contains("labels") && t.map.structural_problems().empty()) {
            t.edge_names.assign(t.map.edge_count(), "");
            for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it) {
                int h = std::stoi(it.key());
                if (h < 0 || h >= n) throw Error(ErrorKind::InvalidInput, "label for unknown half-edge");
                t.edge_names[t.map.edge_of(h)] = it.value().get<std::string>();
            }
        }
        return t;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("tiling: ") + e.what());
    } catch (const std::logic_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("tiling: ") + e.what());
    }
}

Json tiling_to_json(const BraneTiling& t) {
    const CombinatorialMap& m = t.map;
    Json j;
    std::vector<int> ids(m.half_edge_count());
    for (int h = 0; h < m.half_edge_count(); ++h) ids[h] = h;
    j["half_edges"] = ids;
    Json inv = Json::array();
    for (int e = 0; e < m.edge_count(); ++e) {
        auto [a, b] = m.edge_half_edges(e);
        inv.push_back({a, b});
    }
    j["involution"] = inv;
    j["rotation"] = m.vertex_cycles();
    Json col = Json::array();
    for (Color c : t.coloring) col.push_back(c == Color::Black ? "b" : "w");
    j["coloring"] = col;
    Json labels = Json::object();
    for (int e = 0; e < m.edge_count(); ++e)
        if (e < static_cast<int>(t.edge_names.size()) && !t.edge_names[e].empty())
            labels[std::to_string(m.edge_half_edges(e).first)] = t.edge_names[e];
    if (!labels.empty()) j["labels"] = labels;
    return j;
}

Json quiver_to_json(const Quiver& q) {
    Json j;
    j["vertices"] = q.vertex_names();
    Json arrows = Json::array();
    for (const Arrow& a : q.arrows())
        arrows.push_back({{"id", a.name},
                          {"src", q.vertex_name(a.source)},
                          {"tgt", q.vertex_name(a.target)},
                          {"localized", a.localized}});
    j["arrows"] = arrows;
    return j;
}

Quiver quiver_from_json(const Json& j) {
    try {
        Quiver q;
        for (const auto& v : j.at("vertices")) q.add_vertex(as_name(v));
        for (const auto& a : j.at("arrows"))
            q.add_arrow(as_name(a.at("id")), q.vertex_id(as_name(a.at("src"))), q.vertex_id(as_name(a.at("tgt"))),
                        a.value("localized", false));
        return q;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("quiver: ") + e.what());
    }
}

Json word_to_json(const Quiver& q, const Word& w) {
    Json letters = Json::array();
    for (const Letter& l : w.letters) letters.push_back({q.arrow(l.arrow).name, l.exp});
    return letters;
}

Word word_from_json(const Quiver& q, const Json& j) {
    if (j.is_string()) return parse_word(q, j.get<std::string>());
    std::vector<Letter> letters;
    for (const auto& l : j) letters.push_back(Letter{q.arrow_id(as_name(l.at(0))), l.at(1).get<int>()});
    return make_word(q, letters);
}

Json element_to_json(const Quiver& q, const Element& x) {
    Json terms = Json::array();
    for (const auto& [w, c] : x.terms()) {
        Json t{{"coeff", rational_json(c)}, {"word", word_to_json(q, w)}};
        if (w.is_constant()) t["vertex"] = q.vertex_name(w.source);
        terms.push_back(t);
    }
    return terms;
}

Element element_from_json(const Quiver& q, const Json& j) {
    try {
        if (j.is_string()) return parse_element(q, j.get<std::string>());
        Element x;
        for (const auto& t : j) {
            Rational c = t.contains("coeff") ? as_rational(t.at("coeff")) : Rational(1);
            const Json& word = t.at("word");
            if (word.is_array() && word.empty()) {
                if (!t.contains("vertex")) throw Error(ErrorKind::MalformedWord, "constant path needs a vertex");
                x.add(constant_path(q.vertex_id(as_name(t.at("vertex")))), c);
            } else {
                x.add(word_from_json(q, word), c);
            }
        }
        return x;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("element: ") + e.what());
    }
}

Json potential_to_json(const Quiver& q, const Potential& w) {
    Element e;
    for (const auto& [cycle, c] : w.terms()) e.add(cycle, c);
    return element_to_json(q, e);
}

Potential potential_from_json(const Quiver& q, const Json& j) { return potential_from_element(q, element_from_json(q, j)); }

Json qpot_to_json(const Quiver& q, const Potential& w) {
    Json j = quiver_to_json(q);
    j["potential"] = potential_to_json(q, w);
    j["potential_text"] = format_potential(q, w);
    return j;
}

std::pair<Quiver, Potential> qpot_from_json(const Json& j) {
    Quiver q = quiver_from_json(j);
    Potential w;
    if (j.contains("potential")) w = potential_from_json(q, j.at("potential"));
    return {std::move(q), std::move(w)};
}

TilingAutomorphism tiling_automorphism_from_json(const Json& j) {
    try {
        TilingAutomorphism phi;
        phi.half_edge_perm = j.at("half_edge_perm").get<std::vector<int>>();
        phi.order = j.value("order", 1);
        return phi;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("automorphism: ") + e.what());
    }
}

Json tiling_automorphism_to_json(const TilingAutomorphism& phi) {
    return Json{{"order", phi.order}, {"half_edge_perm", phi.half_edge_perm}};
}

namespace {

// A permutation given either as an index array or as a name -> name object.
std::vector<int> read_perm(const Json& j, int size, const std::function<int(const std::string&)>& id_of) {
    std::vector<int> p(size, -1);
    if (j.is_array()) {
        if (static_cast<int>(j.size()) != size) throw Error(ErrorKind::InvalidAutomorphism, "permutation size mismatch");
        for (int k = 0; k < size; ++k) p[k] = j[k].is_string() ? id_of(j[k].get<std::string>()) : j[k].get<int>();
        return p;
    }
    for (auto it = j.begin(); it != j.end(); ++it) p[id_of(it.key())] = id_of(it.value().get<std::string>());
    return p;
}

} // namespace

QuiverAutomorphism quiver_automorphism_from_json(const Quiver& q, const Json& j) {
    try {
        QuiverAutomorphism phi;
        phi.order = j.value("order", 1);
        phi.vertex_perm = read_perm(j.at("vertex_perm"), q.vertex_count(),
                                    [&](const std::string& name) { return q.vertex_id(name); });
        phi.arrow_perm =
            read_perm(j.at("arrow_perm"), q.arrow_count(), [&](const std::string& name) { return q.arrow_id(name); });
        return phi;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("automorphism: ") + e.what());
    }
}

Json quiver_automorphism_to_json(const Quiver& q, const QuiverAutomorphism& phi) {
    Json vp = Json::object(), ap = Json::object();
    for (int v = 0; v < q.vertex_count(); ++v) vp[q.vertex_name(v)] = q.vertex_name(phi.vertex_perm[v]);
    for (int a = 0; a < q.arrow_count(); ++a) ap[q.arrow(a).name] = q.arrow(phi.arrow_perm[a]).name;
    return Json{{"order", phi.order}, {"vertex_perm", vp}, {"arrow_perm", ap}};
}

DehnConfig dehn_config_from_json(const Json& j) {
    try {
        DehnConfig c;
        c.pres = SurfacePresentation::standard(j.value("genus", 2));
        if (!j.contains("phi_star")) throw Error(ErrorKind::MissingPhiAction, "config has no phi_star");
        c.phi = phi_action_from_map(c.pres, j.at("phi_star").get<std::map<std::string, std::string>>(),
                                    j.value("order", 1));
        if (j.contains("arrow_classes"))
            c.arrow_classes = j.at("arrow_classes").get<std::map<std::string, std::string>>();
        if (j.contains("tree")) c.tree = j.at("tree").get<std::vector<std::string>>();
        c.basepoint = j.value("basepoint", std::string{});
        return c;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("presentation config: ") + e.what());
    }
}

DerivationScript derivation_script_from_json(const Json& j) {
    try {
        DerivationScript s;
        if (j.contains("contract")) s.contract = j.at("contract").get<std::vector<std::string>>();
        for (const Json& st : j.value("steps", Json::array())) {
            ScriptStep step;
            step.id = as_name(st.at("id"));
            step.kind = st.at("kind").get<std::string>();
            step.from = as_name(st.at("from"));
            step.using_ref = st.value("using", std::string{});
            step.forward = st.value("direction", std::string("forward")) != "backward";
            step.word = st.value("word", std::string{});
            step.left = st.value("side", std::string("left")) != "right";
            step.claim = st.at("claim").get<std::string>();
            step.label = st.value("label", std::string{});
            s.steps.push_back(std::move(step));
        }
        if (j.contains("target_alphabet")) s.target_alphabet = j.at("target_alphabet").get<std::vector<std::string>>();
        if (j.contains("translate")) s.translate = j.at("translate").get<std::map<std::string, std::string>>();
        for (const Json& t : j.value("targets", Json::array()))
            s.targets.push_back(ScriptTarget{t.at("name").get<std::string>(), t.at("identity").get<std::string>()});
        return s;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("script: ") + e.what());
    }
}

Json psi_report_to_json(const PsiReport& r) {
    Json arrows = Json::array();
    for (const auto& a : r.arrows)
        arrows.push_back({{"arrow", a.arrow}, {"pass", a.pass}, {"detail", a.detail}, {"conjugates", a.conjugates}});
    return Json{{"pass", r.pass}, {"mode", r.mode}, {"arrows", arrows}};
}

Json script_report_to_json(const ScriptReport& r) {
    Json steps = Json::array();
    for (const auto& s : r.steps) steps.push_back({{"id", s.id}, {"ok", s.ok}, {"message", s.message}});
    Json out{{"valid", r.valid},
             {"steps", steps},
             {"established", r.established},
             {"targets_met", r.targets_met},
             {"targets_missing", r.targets_missing}};
    out["first_failure"] = r.first_failure < 0 ? Json(nullptr) : Json(r.first_failure);
    return out;
}

} // namespace tessella
