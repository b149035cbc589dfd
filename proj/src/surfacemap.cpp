#include "tessella/surfacemap.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace tessella {

CombinatorialMap::CombinatorialMap(std::vector<int> involution, const std::vector<std::vector<int>>& vertex_cycles)
    : involution_(std::move(involution)) {
    const int n = static_cast<int>(involution_.size());
    rotation_.assign(n, -1);
    vertex_of_.assign(n, -1);

    for (int h = 0; h < n; ++h) {
        int p = involution_[h];
        if (p < 0 || p >= n) {
            problems_.push_back("involution: half-edge " + std::to_string(h) + " maps outside the half-edge set");
        } else if (p == h) {
            problems_.push_back("involution: half-edge " + std::to_string(h) + " is a fixed point");
        } else if (involution_[p] != h) {
            problems_.push_back("involution: half-edge " + std::to_string(h) + " is not paired symmetrically");
        }
    }
    for (std::size_t v = 0; v < vertex_cycles.size(); ++v) {
        const auto& cyc = vertex_cycles[v];
        if (cyc.empty()) problems_.push_back("rotation: vertex " + std::to_string(v) + " has no half-edges");
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int h = cyc[i];
            if (h < 0 || h >= n) {
                problems_.push_back("rotation: unknown half-edge " + std::to_string(h));
                continue;
            }
            if (vertex_of_[h] != -1) {
                problems_.push_back("rotation: half-edge " + std::to_string(h) + " appears twice");
                continue;
            }
            vertex_of_[h] = static_cast<int>(v);
            rotation_[h] = cyc[(i + 1) % cyc.size()];
        }
    }
    for (int h = 0; h < n; ++h)
        if (vertex_of_[h] == -1) problems_.push_back("rotation: half-edge " + std::to_string(h) + " has no vertex");
    if (!problems_.empty()) return;

    vertex_cycles_ = vertex_cycles;
    rotation_inv_.assign(n, 0);
    for (int h = 0; h < n; ++h) rotation_inv_[rotation_[h]] = h;

    face_of_.assign(n, -1);
    for (int h = 0; h < n; ++h) {
        if (face_of_[h] != -1) continue;
        std::vector<int> cyc;
        for (int x = h; face_of_[x] == -1; x = face_next(x)) {
            face_of_[x] = static_cast<int>(face_cycles_.size());
            cyc.push_back(x);
        }
        face_cycles_.push_back(std::move(cyc));
    }

    edge_of_.assign(n, -1);
    for (int h = 0; h < n; ++h) {
        if (edge_of_[h] != -1) continue;
        edge_of_[h] = edge_of_[involution_[h]] = static_cast<int>(edge_halves_.size());
        edge_halves_.emplace_back(h, involution_[h]);
    }
}

std::vector<std::string> CombinatorialMap::structural_problems() const { return problems_; }

bool CombinatorialMap::connected() const {
    const int n = half_edge_count();
    if (n == 0 || !problems_.empty()) return n == 0;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int h = stack.back();
        stack.pop_back();
        for (int next : {involution_[h], rotation_[h], rotation_inv_[h]}) {
            if (!seen[next]) {
                seen[next] = 1;
                ++count;
                stack.push_back(next);
            }
        }
    }
    return count == n;
}

int genus(const CombinatorialMap& map) {
    auto problems = map.structural_problems();
    if (!problems.empty()) throw Error(ErrorKind::NonOrientableOrInvalid, problems.front());
    int chi = map.vertex_count() - map.edge_count() + map.face_count();
    if (chi > 2 || (2 - chi) % 2 != 0)
        throw Error(ErrorKind::NonOrientableOrInvalid, "Euler characteristic " + std::to_string(chi));
    return (2 - chi) / 2;
}

std::string BraneTiling::edge_name(int e) const {
    if (e < static_cast<int>(edge_names.size()) && !edge_names[e].empty()) return edge_names[e];
    return "x" + std::to_string(e);
}

ValidationReport validate_tiling(const BraneTiling& tiling) {
    ValidationReport report;
    const CombinatorialMap& m = tiling.map;
    report.violations = m.structural_problems();
    if (report.violations.empty()) {
        report.vertices = m.vertex_count();
        report.edges = m.edge_count();
        report.faces = m.face_count();
        if (static_cast<int>(tiling.coloring.size()) != m.vertex_count())
            report.violations.push_back("coloring: expected one color per vertex");
        else
            for (int e = 0; e < m.edge_count(); ++e) {
                auto [h1, h2] = m.edge_half_edges(e);
                if (tiling.coloring[m.vertex_of(h1)] == tiling.coloring[m.vertex_of(h2)]) {
                    report.violations.push_back("bipartiteness: edge " + std::to_string(e) +
                                                " joins two vertices of the same color");
                    break;
                }
            }
        if (!m.connected()) report.violations.push_back("connectivity: the map is not connected");
        try {
            report.genus = genus(m);
        } catch (const Error& err) {
            report.violations.push_back(std::string("euler: ") + err.what());
        }
    }
    report.valid = report.violations.empty();
    return report;
}

DualQuiver dual_quiver(const BraneTiling& tiling) {
    ValidationReport report = validate_tiling(tiling);
    if (!report.valid) throw Error(ErrorKind::InvalidTiling, report.violations.front());
    const CombinatorialMap& m = tiling.map;
    DualQuiver out;
    for (int f = 0; f < m.face_count(); ++f) out.quiver.add_vertex(std::to_string(f + 1));
    out.arrow_of_edge.assign(m.edge_count(), -1);
    for (int e = 0; e < m.edge_count(); ++e) {
        auto [h1, h2] = m.edge_half_edges(e);
        int black = tiling.color_of_half_edge(h1) == Color::Black ? h1 : h2;
        int white = m.involution(black);
        out.arrow_of_edge[e] = out.quiver.add_arrow(tiling.edge_name(e), m.face_of(black), m.face_of(white));
        out.edge_of_arrow.push_back(e);
    }
    for (int v = 0; v < m.vertex_count(); ++v) {
        Rational sign = tiling.coloring[v] == Color::White ? 1 : -1;
        out.potential.add_cycle(out.quiver, minimal_cycle(tiling, out, v), sign);
    }
    return out;
}

Word minimal_cycle(const BraneTiling& tiling, const DualQuiver& dual, int vertex) {
    const CombinatorialMap& m = tiling.map;
    if (vertex < 0 || vertex >= m.vertex_count()) throw Error(ErrorKind::UnknownVertex, std::to_string(vertex));
    std::vector<int> cyc = m.vertex_cycles()[vertex];
    std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
    // Rotation order is the written order at white vertices and its
    // reverse at black ones.
    if (tiling.coloring[vertex] == Color::Black) std::reverse(cyc.begin(), cyc.end());
    std::vector<Letter> letters;
    for (int h : cyc) letters.push_back(Letter{dual.arrow_of_edge[m.edge_of(h)], 1});
    return make_word(dual.quiver, letters);
}

bool is_perfect_matching(const BraneTiling& tiling, const std::vector<int>& edges) {
    std::vector<int> hits(tiling.map.vertex_count(), 0);
    std::set<int> distinct(edges.begin(), edges.end());
    if (distinct.size() != edges.size()) return false;
    for (int e : edges) {
        if (e < 0 || e >= tiling.map.edge_count()) return false;
        auto [h1, h2] = tiling.map.edge_half_edges(e);
        ++hits[tiling.map.vertex_of(h1)];
        ++hits[tiling.map.vertex_of(h2)];
    }
    return std::all_of(hits.begin(), hits.end(), [](int k) { return k == 1; });
}

bool meets_each_term_once(const Quiver& q, const Potential& w, const std::vector<int>& arrows) {
    (void)q;
    std::set<int> chosen(arrows.begin(), arrows.end());
    for (const auto& [cycle, c] : w.terms()) {
        int hits = 0;
        for (const Letter& l : cycle.letters) hits += chosen.count(l.arrow) ? 1 : 0;
        if (hits != 1) return false;
    }
    return true;
}

} // namespace tessella
