#pragma once

// Hand-built fixtures for the genus-2 running example and random quivers.
// These are written out independently of the tiling and transport code so
// tests can compare library output against them.

#include "tessella/pathalg.hpp"

#include <random>
#include <string>

namespace fixture {

using namespace tessella;

// Q: loops a, b at 1; c, d, e: 1 -> 2; f, g, h: 2 -> 1; loops i, j at 2.
inline Quiver running_quiver() {
    Quiver q;
    int v1 = q.add_vertex("1");
    int v2 = q.add_vertex("2");
    q.add_arrow("a", v1, v1);
    q.add_arrow("b", v1, v1);
    q.add_arrow("c", v1, v2);
    q.add_arrow("d", v1, v2);
    q.add_arrow("e", v1, v2);
    q.add_arrow("f", v2, v1);
    q.add_arrow("g", v2, v1);
    q.add_arrow("h", v2, v1);
    q.add_arrow("i", v2, v2);
    q.add_arrow("j", v2, v2);
    return q;
}

inline const char* running_potential_text() { return "abfjie + gc + hd - agic - bhjd - fe"; }

// Q': generators a..e and the invertible arrow r: 2 -> 1.
inline Quiver orbit_quiver(bool r_localized = true) {
    Quiver q;
    int v1 = q.add_vertex("1");
    int v2 = q.add_vertex("2");
    q.add_arrow("a", v1, v1);
    q.add_arrow("b", v1, v1);
    q.add_arrow("c", v1, v2);
    q.add_arrow("d", v1, v2);
    q.add_arrow("e", v1, v2);
    q.add_arrow("r", v2, v1, r_localized);
    return q;
}

inline const char* transported_potential_text() { return "abreabre + 2rdrc - 2ardbrc - rere"; }

struct RandomInstance {
    Quiver quiver;
    Potential potential;
};

inline RandomInstance random_instance(std::mt19937& rng, int max_vertices = 4, int max_arrows = 8,
                                      int max_term = 6) {
    RandomInstance out;
    std::uniform_int_distribution<int> nv(1, max_vertices);
    int vertices = nv(rng);
    for (int v = 0; v < vertices; ++v) out.quiver.add_vertex(std::to_string(v + 1));
    std::uniform_int_distribution<int> na(1, max_arrows);
    std::uniform_int_distribution<int> pick_v(0, vertices - 1);
    int arrows = na(rng);
    for (int a = 0; a < arrows; ++a) out.quiver.add_arrow("x" + std::to_string(a), pick_v(rng), pick_v(rng));

    std::uniform_int_distribution<int> nterms(0, 5);
    std::uniform_int_distribution<int> len(1, max_term);
    std::uniform_int_distribution<int> coeff(-3, 3);
    int wanted = nterms(rng);
    for (int attempt = 0; attempt < 200 && static_cast<int>(out.potential.size()) < wanted; ++attempt) {
        int start = pick_v(rng);
        int cur = start;
        int length = len(rng);
        std::vector<Letter> rev;
        bool stuck = false;
        for (int k = 0; k < length; ++k) {
            std::vector<int> outgoing;
            for (int a = 0; a < arrows; ++a)
                if (out.quiver.arrow(a).source == cur) outgoing.push_back(a);
            if (outgoing.empty()) {
                stuck = true;
                break;
            }
            int a = outgoing[std::uniform_int_distribution<std::size_t>(0, outgoing.size() - 1)(rng)];
            rev.push_back(Letter{a, 1});
            cur = out.quiver.arrow(a).target;
        }
        if (stuck || cur != start) continue;
        std::vector<Letter> letters(rev.rbegin(), rev.rend());
        int c = coeff(rng);
        if (c == 0) c = 1;
        out.potential.add_cycle(out.quiver, make_word(out.quiver, letters), c);
    }
    return out;
}

} // namespace fixture

#include "tessella/surfacemap.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace fixture {

#ifndef TESSELLA_DATA_DIR
#define TESSELLA_DATA_DIR "data"
#endif

inline std::string data_path(const std::string& name) { return std::string(TESSELLA_DATA_DIR) + "/" + name; }

// Random connected bipartite map.  Edge k owns half-edges 2k (white end)
// and 2k+1 (black end); each vertex gets a random cyclic order.
inline BraneTiling random_tiling(std::mt19937& rng, int max_per_color = 3, int max_extra_edges = 4) {
    std::uniform_int_distribution<int> nb(1, max_per_color);
    int whites = nb(rng), blacks = nb(rng);
    std::vector<std::pair<int, int>> edges; // (white, black)
    // spanning tree first; seeding with one vertex of each color keeps
    // an opposite-color partner available for every later vertex
    std::vector<int> order;
    for (int v = 1; v < whites + blacks; ++v)
        if (v != whites) order.push_back(v);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> placed{0, whites};
    edges.emplace_back(0, whites);
    for (int v : order) {
        bool v_white = v < whites;
        std::vector<int> partners;
        for (int u : placed)
            if ((u < whites) != v_white) partners.push_back(u);
        int u = partners[std::uniform_int_distribution<std::size_t>(0, partners.size() - 1)(rng)];
        edges.emplace_back(v_white ? v : u, v_white ? u : v);
        placed.push_back(v);
    }
    int extra = std::uniform_int_distribution<int>(0, max_extra_edges)(rng);
    for (int k = 0; k < extra; ++k)
        edges.emplace_back(std::uniform_int_distribution<int>(0, whites - 1)(rng),
                           whites + std::uniform_int_distribution<int>(0, blacks - 1)(rng));
    std::vector<std::vector<int>> cycles(whites + blacks);
    std::vector<int> inv(2 * edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        cycles[edges[k].first].push_back(2 * static_cast<int>(k));
        cycles[edges[k].second].push_back(2 * static_cast<int>(k) + 1);
        inv[2 * k] = static_cast<int>(2 * k + 1);
        inv[2 * k + 1] = static_cast<int>(2 * k);
    }
    for (auto& c : cycles) std::shuffle(c.begin(), c.end(), rng);
    BraneTiling t;
    t.map = CombinatorialMap(inv, cycles);
    for (int v = 0; v < whites + blacks; ++v) t.coloring.push_back(v < whites ? Color::White : Color::Black);
    return t;
}

// Searches an arrow bijection (with a vertex bijection) carrying (q1, w1)
// to (q2, w2).  Returns arrow map q1 -> q2 or an empty vector.
inline std::vector<int> find_relabeling(const Quiver& q1, const Potential& w1, const Quiver& q2, const Potential& w2) {
    if (q1.vertex_count() != q2.vertex_count() || q1.arrow_count() != q2.arrow_count()) return {};
    std::vector<int> vperm(q1.vertex_count());
    for (int v = 0; v < q1.vertex_count(); ++v) vperm[v] = v;
    do {
        std::vector<int> amap(q1.arrow_count(), -1);
        std::vector<char> used(q2.arrow_count(), 0);
        std::vector<int> found;
        std::function<bool(int)> rec = [&](int a) -> bool {
            if (a == q1.arrow_count()) {
                Potential image;
                for (const auto& [cyc, c] : w1.terms()) {
                    std::vector<Letter> letters;
                    for (const Letter& l : cyc.letters) letters.push_back(Letter{amap[l.arrow], l.exp});
                    image.add_cycle(q2, make_word(q2, letters), c);
                }
                if (image == w2) {
                    found = amap;
                    return true;
                }
                return false;
            }
            for (int b = 0; b < q2.arrow_count(); ++b) {
                if (used[b] || q2.arrow(b).source != vperm[q1.arrow(a).source] ||
                    q2.arrow(b).target != vperm[q1.arrow(a).target])
                    continue;
                used[b] = 1;
                amap[a] = b;
                if (rec(a + 1)) return true;
                used[b] = 0;
            }
            return false;
        };
        if (rec(0)) return found;
    } while (std::next_permutation(vperm.begin(), vperm.end()));
    return {};
}

} // namespace fixture
