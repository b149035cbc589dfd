#include "tessella/equivariant.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace tessella {

namespace {

// Mutable copy of a tiling plus its automorphism, with the two local
// surgeries the refinement and dimer steps need.
struct Surgery {
    std::vector<int> inv, rot, rot_inv, phi;
    std::vector<int> vertex_rep; // one half-edge per vertex, in vertex order
    std::vector<int> vertex_of;
    std::vector<Color> colors;
    std::vector<std::string> names; // per half-edge (empty = unnamed)
    int order = 1;

    Surgery(const BraneTiling& t, const TilingAutomorphism& p) : phi(p.half_edge_perm), order(p.order) {
        const CombinatorialMap& m = t.map;
        inv = m.involution_perm();
        rot = m.rotation_perm();
        rot_inv.assign(rot.size(), 0);
        for (std::size_t h = 0; h < rot.size(); ++h) rot_inv[rot[h]] = static_cast<int>(h);
        for (const auto& cyc : m.vertex_cycles()) vertex_rep.push_back(cyc.front());
        vertex_of.assign(rot.size(), 0);
        for (int h = 0; h < m.half_edge_count(); ++h) vertex_of[h] = m.vertex_of(h);
        colors = t.coloring;
        names.assign(rot.size(), "");
        for (int e = 0; e < m.edge_count(); ++e)
            if (e < static_cast<int>(t.edge_names.size())) names[m.edge_half_edges(e).first] = t.edge_names[e];
    }

    int size() const { return static_cast<int>(rot.size()); }

    int fresh() {
        int h = size();
        inv.push_back(-1);
        rot.push_back(h);
        rot_inv.push_back(h);
        phi.push_back(-1);
        vertex_of.push_back(-1);
        names.emplace_back();
        return h;
    }

    // New half-edge in the corner just before z (counter-clockwise order).
    int insert_before(int z) {
        int h = fresh();
        int y = rot_inv[z];
        rot[y] = h;
        rot_inv[h] = y;
        rot[h] = z;
        rot_inv[z] = h;
        vertex_of[h] = vertex_of[z];
        return h;
    }

    // New vertex whose half-edges, counter-clockwise, are `around`.
    int add_vertex(const std::vector<int>& around, Color c) {
        int v = static_cast<int>(vertex_rep.size());
        for (std::size_t i = 0; i < around.size(); ++i) {
            rot[around[i]] = around[(i + 1) % around.size()];
            rot_inv[around[(i + 1) % around.size()]] = around[i];
            vertex_of[around[i]] = v;
        }
        vertex_rep.push_back(around.front());
        colors.push_back(c);
        return v;
    }

    void pair(int a, int b) {
        inv[a] = b;
        inv[b] = a;
    }

    BraneTiling build() const {
        std::vector<std::vector<int>> cycles;
        for (int rep : vertex_rep) {
            std::vector<int> cyc{rep};
            for (int h = rot[rep]; h != rep; h = rot[h]) cyc.push_back(h);
            cycles.push_back(std::move(cyc));
        }
        BraneTiling t;
        t.map = CombinatorialMap(inv, cycles);
        t.coloring = colors;
        t.edge_names.assign(t.map.edge_count(), "");
        for (int e = 0; e < t.map.edge_count(); ++e) {
            auto [h1, h2] = t.map.edge_half_edges(e);
            t.edge_names[e] = !names[h1].empty() ? names[h1] : names[h2];
        }
        bool any = std::any_of(t.edge_names.begin(), t.edge_names.end(), [](const std::string& s) { return !s.empty(); });
        if (!any) t.edge_names.clear();
        return t;
    }

    TilingAutomorphism automorphism() const { return TilingAutomorphism{phi, order}; }
};

std::vector<int> face_orbit_sizes(const BraneTiling& t, const TilingAutomorphism& phi) {
    const CombinatorialMap& m = t.map;
    std::vector<int> out(m.face_count());
    for (int f = 0; f < m.face_count(); ++f) {
        int k = 1;
        int h = m.face_cycles()[f][0];
        for (int x = m.face_of(phi.half_edge_perm[h]); x != f; x = m.face_of(phi.half_edge_perm[m.face_cycles()[x][0]]))
            ++k;
        out[f] = k;
    }
    return out;
}

int phi_power(const std::vector<int>& phi, int h, int k) {
    for (int j = 0; j < k; ++j) h = phi[h];
    return h;
}

void check_same_genus(const BraneTiling& before, const BraneTiling& after) {
    ValidationReport r = validate_tiling(after);
    if (!r.valid) throw Error(ErrorKind::InvalidTiling, "surgery produced an invalid tiling: " + r.violations.front());
    if (r.genus != genus(before.map)) throw Error(ErrorKind::InvalidTiling, "surgery changed the genus");
}

} // namespace

RefineResult refine_tiling(const BraneTiling& tiling, const TilingAutomorphism& phi) {
    ValidationReport report = validate_tiling(tiling);
    if (!report.valid) throw Error(ErrorKind::InvalidTiling, report.violations.front());
    validate_automorphism(tiling, phi);
    RefineResult out{tiling, phi, 0, 0};
    const int n = phi.order;

    for (int guard = 0; guard < 4 * tiling.map.face_count() + 4; ++guard) {
        const BraneTiling& t = out.tiling;
        const CombinatorialMap& m = t.map;
        std::vector<int> sizes = face_orbit_sizes(t, out.phi);
        auto it = std::find_if(sizes.begin(), sizes.end(), [n](int s) { return s != n; });
        if (it == sizes.end()) return out;
        const int face = static_cast<int>(it - sizes.begin());
        const int d = *it;
        const int spokes = n / d;

        // corner at the lowest black vertex on the boundary, lowest half-edge there
        int z0 = -1;
        for (int h : m.face_cycles()[face]) {
            if (t.color_of_half_edge(h) != Color::Black) continue;
            if (z0 < 0 || m.vertex_of(h) < m.vertex_of(z0) || (m.vertex_of(h) == m.vertex_of(z0) && h < z0)) z0 = h;
        }
        std::vector<int> corners;
        for (int k = 0; k < n; ++k) corners.push_back(phi_power(out.phi.half_edge_perm, z0, k));
        if (std::set<int>(corners.begin(), corners.end()).size() != corners.size())
            throw Error(ErrorKind::InvalidAutomorphism,
                        "phi^" + std::to_string(d) + " fixes a face but not freely on its boundary corners");

        Surgery s(t, out.phi);
        std::map<int, int> spoke_in, spoke_out; // corner -> inserted half-edge / half-edge at the centre
        for (int z : corners) {
            spoke_in[z] = s.insert_before(z);
            spoke_out[z] = s.fresh();
            s.pair(spoke_in[z], spoke_out[z]);
        }
        // one centre per face of the orbit; its spokes run against the face order
        std::set<int> done;
        for (int z : corners) {
            int f = m.face_of(z);
            if (done.count(f)) continue;
            done.insert(f);
            std::vector<int> around;
            for (int h : m.face_cycles()[f])
                if (spoke_out.count(h)) around.push_back(spoke_out[h]);
            if (static_cast<int>(around.size()) != spokes)
                throw Error(ErrorKind::InvalidAutomorphism, "unexpected corner pattern on a fixed face");
            std::reverse(around.begin(), around.end());
            s.add_vertex(around, Color::White);
        }
        for (int z : corners) {
            s.phi[spoke_in[z]] = spoke_in[out.phi.half_edge_perm[z]];
            s.phi[spoke_out[z]] = spoke_out[out.phi.half_edge_perm[z]];
        }
        BraneTiling next = s.build();
        check_same_genus(t, next);
        TilingAutomorphism next_phi = s.automorphism();
        validate_automorphism(next, next_phi);
        out.added_vertices += d;
        out.added_edges += n;
        out.tiling = std::move(next);
        out.phi = std::move(next_phi);
    }
    throw Error(ErrorKind::InvalidAutomorphism, "refinement did not converge");
}

namespace {

struct MatchState {
    std::vector<int> partner_edge; // per vertex, -1 if unmatched
};

int other_end(const CombinatorialMap& m, int e, int v) {
    auto [h1, h2] = m.edge_half_edges(e);
    return m.vertex_of(h1) == v ? m.vertex_of(h2) : m.vertex_of(h1);
}

// Maximum matching by augmenting paths from each black vertex in id order.
std::vector<int> maximum_matching(const BraneTiling& t) {
    const CombinatorialMap& m = t.map;
    std::vector<std::vector<int>> incident(m.vertex_count());
    for (int e = 0; e < m.edge_count(); ++e) {
        auto [h1, h2] = m.edge_half_edges(e);
        int b = t.color_of_half_edge(h1) == Color::Black ? m.vertex_of(h1) : m.vertex_of(h2);
        incident[b].push_back(e);
    }
    std::vector<int> match(m.vertex_count(), -1);
    for (int root = 0; root < m.vertex_count(); ++root) {
        if (t.coloring[root] != Color::Black || match[root] != -1) continue;
        std::vector<int> via(m.vertex_count(), -1); // white vertex -> edge used to reach it
        std::vector<int> from(m.vertex_count(), -1);
        std::deque<int> queue{root};
        std::vector<char> seen_black(m.vertex_count(), 0);
        seen_black[root] = 1;
        int end = -1;
        while (!queue.empty() && end < 0) {
            int b = queue.front();
            queue.pop_front();
            for (int e : incident[b]) {
                int w = other_end(m, e, b);
                if (via[w] != -1) continue;
                via[w] = e;
                from[w] = b;
                if (match[w] == -1) {
                    end = w;
                    break;
                }
                int b2 = other_end(m, match[w], w);
                if (!seen_black[b2]) {
                    seen_black[b2] = 1;
                    queue.push_back(b2);
                }
            }
        }
        for (int w = end; w != -1;) {
            int b = from[w];
            int e = via[w];
            int prev_w = b == root ? -1 : other_end(m, match[b], b);
            match[w] = e;
            match[b] = e;
            w = prev_w;
        }
    }
    return match;
}

// Adds the phi-orbit of pendant vertices of color c, hanging off the corner z.
// Returns the new half-edge at z.
int add_pendant_orbit(Surgery& s, int z, Color c) {
    std::vector<int> corners;
    for (int k = 0; k < s.order; ++k) corners.push_back(phi_power(s.phi, z, k));
    std::map<int, int> in, out;
    for (int x : corners) {
        in[x] = s.insert_before(x);
        out[x] = s.fresh();
        s.pair(in[x], out[x]);
        s.add_vertex({out[x]}, c);
    }
    for (int x : corners) {
        s.phi[in[x]] = in[s.phi[x]];
        s.phi[out[x]] = out[s.phi[x]];
    }
    return in[z];
}

int lowest_half_edge_at(const CombinatorialMap& m, int v) {
    const auto& cyc = m.vertex_cycles()[v];
    return *std::min_element(cyc.begin(), cyc.end());
}

// Adds the phi-orbit of a chord joining corners zb and zw of one face.
// Returns the half-edge at zb of the first copy.
int add_chord_orbit(Surgery& s, int zb, int zw) {
    std::vector<int> cb, cw;
    for (int k = 0; k < s.order; ++k) {
        cb.push_back(phi_power(s.phi, zb, k));
        cw.push_back(phi_power(s.phi, zw, k));
    }
    std::vector<int> hb, hw;
    for (int k = 0; k < s.order; ++k) {
        hb.push_back(s.insert_before(cb[k]));
        hw.push_back(s.insert_before(cw[k]));
        s.pair(hb[k], hw[k]);
    }
    for (int k = 0; k < s.order; ++k) {
        s.phi[hb[k]] = hb[(k + 1) % s.order];
        s.phi[hw[k]] = hw[(k + 1) % s.order];
    }
    return hb[0];
}

} // namespace

DimerResult equivariant_dimer(const BraneTiling& tiling, const TilingAutomorphism& phi) {
    ValidationReport report = validate_tiling(tiling);
    if (!report.valid) throw Error(ErrorKind::InvalidTiling, report.violations.front());
    validate_automorphism(tiling, phi);
    const int n = phi.order;
    {
        auto sizes = face_orbit_sizes(tiling, phi);
        if (std::any_of(sizes.begin(), sizes.end(), [n](int s) { return s != n; }))
            throw Error(ErrorKind::OrbitSizeViolation, "refine the tiling before extending to a dimer");
    }
    DimerResult out{tiling, phi, {}, 0, 0};

    // balance the two colors with pendant vertex orbits
    int blacks = 0, whites = 0;
    for (Color c : tiling.coloring) (c == Color::Black ? blacks : whites)++;
    if ((blacks - whites) % n != 0)
        throw Error(ErrorKind::DimerExtensionFailed, "color imbalance is not a multiple of the order");
    // Hangs a pendant orbit of color c off vertex v; returns the edge at v.
    auto hang = [&](int v, Color c) {
        Surgery s(out.tiling, out.phi);
        int h = add_pendant_orbit(s, lowest_half_edge_at(out.tiling.map, v), c);
        BraneTiling next = s.build();
        check_same_genus(out.tiling, next);
        out.tiling = std::move(next);
        out.phi = s.automorphism();
        out.added_vertices += n;
        out.added_edges += n;
        (c == Color::Black ? blacks : whites) += n;
        return out.tiling.map.edge_of(h);
    };
    // pendants go to vertices a maximum matching leaves uncovered, free orbits first
    while (blacks != whites) {
        Color need = blacks < whites ? Color::Black : Color::White;
        std::vector<int> match = maximum_matching(out.tiling);
        const CombinatorialMap& m = out.tiling.map;
        int pick = -1;
        bool pick_free = false;
        for (int v = 0; v < m.vertex_count(); ++v) {
            if (out.tiling.coloring[v] == need || match[v] != -1) continue;
            int h = lowest_half_edge_at(m, v), k = 1;
            for (int x = m.vertex_of(out.phi.half_edge_perm[h]); x != v; x = m.vertex_of(out.phi.half_edge_perm[lowest_half_edge_at(m, x)]))
                ++k;
            bool free = k == n;
            if (pick < 0 || (free && !pick_free)) {
                pick = v;
                pick_free = free;
            }
        }
        hang(pick, need);
    }

    std::vector<int> match = maximum_matching(out.tiling);
    // augment along chains whose steps may jump across a shared face
    for (int guard = 0; guard < 4 * out.tiling.map.vertex_count() + 4; ++guard) {
        const BraneTiling& t = out.tiling;
        const CombinatorialMap& m = t.map;
        int u = -1;
        for (int v = 0; v < m.vertex_count(); ++v)
            if (t.coloring[v] == Color::Black && match[v] == -1) {
                u = v;
                break;
            }
        if (u < 0) break;

        // cofacial pairs: first corner of each vertex in each face
        std::vector<std::map<int, int>> corner(m.vertex_count()); // vertex -> face -> half-edge
        for (int h = 0; h < m.half_edge_count(); ++h) {
            auto& slot = corner[m.vertex_of(h)];
            auto f = m.face_of(h);
            if (!slot.count(f) || h < slot[f]) slot[f] = h;
        }
        std::vector<std::vector<int>> faces_of(m.vertex_count());
        std::vector<std::vector<int>> on_face(m.face_count());
        for (int v = 0; v < m.vertex_count(); ++v)
            for (auto [f, h] : corner[v]) {
                faces_of[v].push_back(f);
                on_face[f].push_back(v);
            }

        std::vector<int> reached_from(m.vertex_count(), -1);
        std::deque<int> queue{u};
        std::vector<char> seen(m.vertex_count(), 0);
        seen[u] = 1;
        int end = -1;
        while (!queue.empty() && end < 0) {
            int b = queue.front();
            queue.pop_front();
            for (int f : faces_of[b]) {
                for (int w : on_face[f]) {
                    if (t.coloring[w] != Color::White || seen[w]) continue;
                    seen[w] = 1;
                    reached_from[w] = b;
                    if (match[w] == -1) {
                        end = w;
                        break;
                    }
                    int b2 = other_end(m, match[w], w);
                    if (!seen[b2]) {
                        seen[b2] = 1;
                        queue.push_back(b2);
                    }
                }
                if (end >= 0) break;
            }
        }
        if (end < 0) {
            // no chain: give u a white partner and some uncovered white a black one
            int v = -1;
            for (int x = 0; x < m.vertex_count() && v < 0; ++x)
                if (t.coloring[x] == Color::White && match[x] == -1) v = x;
            if (v < 0) throw Error(ErrorKind::DimerExtensionFailed, "no augmenting chain exists");
            int eu = hang(u, Color::White);
            int ev = hang(v, Color::Black);
            match.resize(out.tiling.map.vertex_count(), -1);
            for (int e : {eu, ev}) {
                auto [h1, h2] = out.tiling.map.edge_half_edges(e);
                match[out.tiling.map.vertex_of(h1)] = e;
                match[out.tiling.map.vertex_of(h2)] = e;
            }
            continue;
        }

        // collect the chain, then add a chord orbit for every missing edge
        std::vector<std::pair<int, int>> steps; // (black, white) to be matched
        for (int w = end; w != -1;) {
            int b = reached_from[w];
            steps.emplace_back(b, w);
            w = b == u ? -1 : other_end(m, match[b], b);
        }
        std::vector<int> step_edge(steps.size(), -1);
        Surgery s(t, out.phi);
        bool grew = false;
        std::vector<int> chord_half(steps.size(), -1);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            auto [b, w] = steps[i];
            for (int e = 0; e < m.edge_count(); ++e) {
                auto [h1, h2] = m.edge_half_edges(e);
                int x = m.vertex_of(h1), y = m.vertex_of(h2);
                if ((x == b && y == w) || (x == w && y == b)) {
                    step_edge[i] = e;
                    break;
                }
            }
            if (step_edge[i] >= 0) continue;
            int shared = -1;
            for (auto [f, h] : corner[b])
                if (corner[w].count(f)) {
                    shared = f;
                    break;
                }
            chord_half[i] = add_chord_orbit(s, corner[b][shared], corner[w][shared]);
            grew = true;
            out.added_edges += n;
        }
        if (grew) {
            BraneTiling next = s.build();
            check_same_genus(t, next);
            out.phi = s.automorphism();
            out.tiling = std::move(next);
            for (std::size_t i = 0; i < steps.size(); ++i)
                if (chord_half[i] >= 0) step_edge[i] = out.tiling.map.edge_of(chord_half[i]);
        }
        for (std::size_t i = 0; i < steps.size(); ++i) {
            match[steps[i].first] = step_edge[i];
            match[steps[i].second] = step_edge[i];
        }
    }

    std::set<int> edges;
    for (int v = 0; v < out.tiling.map.vertex_count(); ++v)
        if (match[v] >= 0) edges.insert(match[v]);
    out.edges.assign(edges.begin(), edges.end());
    if (!is_perfect_matching(out.tiling, out.edges))
        throw Error(ErrorKind::DimerExtensionFailed, "matching is not perfect");
    validate_automorphism(out.tiling, out.phi);
    return out;
}

} // namespace tessella
