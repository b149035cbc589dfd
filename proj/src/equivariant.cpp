#include "tessella/equivariant.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tessella {

namespace {

bool is_permutation_of_range(const std::vector<int>& p) {
    std::vector<char> seen(p.size(), 0);
    for (int x : p) {
        if (x < 0 || x >= static_cast<int>(p.size()) || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

std::vector<int> power(const std::vector<int>& p, int k) {
    std::vector<int> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        int x = static_cast<int>(i);
        for (int j = 0; j < k; ++j) x = p[x];
        out[i] = x;
    }
    return out;
}

bool is_identity(const std::vector<int>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return false;
    return true;
}

void check_order(const std::vector<std::vector<int>>& perms, int order) {
    if (order < 1) throw Error(ErrorKind::InvalidAutomorphism, "order must be positive");
    for (int k = 1; k <= order; ++k) {
        bool trivial = true;
        for (const auto& p : perms) trivial = trivial && is_identity(power(p, k));
        if (k < order && trivial)
            throw Error(ErrorKind::InvalidAutomorphism, "declared order " + std::to_string(order) +
                                                            " is not minimal (phi^" + std::to_string(k) + " = id)");
        if (k == order && !trivial)
            throw Error(ErrorKind::InvalidAutomorphism, "phi^" + std::to_string(order) + " is not the identity");
    }
}

} // namespace

QuiverAutomorphism identity_automorphism(const Quiver& q) {
    QuiverAutomorphism phi;
    for (int v = 0; v < q.vertex_count(); ++v) phi.vertex_perm.push_back(v);
    for (int a = 0; a < q.arrow_count(); ++a) phi.arrow_perm.push_back(a);
    phi.order = 1;
    return phi;
}

TilingAutomorphism identity_automorphism(const BraneTiling& t) {
    TilingAutomorphism phi;
    for (int h = 0; h < t.map.half_edge_count(); ++h) phi.half_edge_perm.push_back(h);
    return phi;
}

void validate_automorphism(const Quiver& q, const QuiverAutomorphism& phi) {
    if (static_cast<int>(phi.vertex_perm.size()) != q.vertex_count() ||
        static_cast<int>(phi.arrow_perm.size()) != q.arrow_count() || !is_permutation_of_range(phi.vertex_perm) ||
        !is_permutation_of_range(phi.arrow_perm))
        throw Error(ErrorKind::InvalidAutomorphism, "vertex/arrow permutations do not match the quiver");
    for (int a = 0; a < q.arrow_count(); ++a) {
        const Arrow& x = q.arrow(a);
        const Arrow& y = q.arrow(phi.arrow_perm[a]);
        if (y.source != phi.vertex_perm[x.source] || y.target != phi.vertex_perm[x.target])
            throw Error(ErrorKind::InvalidAutomorphism, "arrow " + x.name + " is not carried to a compatible arrow");
    }
    check_order({phi.vertex_perm, phi.arrow_perm}, phi.order);
}

void validate_automorphism(const BraneTiling& t, const TilingAutomorphism& phi) {
    const CombinatorialMap& m = t.map;
    const auto& p = phi.half_edge_perm;
    if (static_cast<int>(p.size()) != m.half_edge_count() || !is_permutation_of_range(p))
        throw Error(ErrorKind::InvalidAutomorphism, "half-edge permutation does not match the map");
    for (int h = 0; h < m.half_edge_count(); ++h) {
        if (p[m.involution(h)] != m.involution(p[h]))
            throw Error(ErrorKind::InvalidAutomorphism, "does not commute with the edge involution");
        if (p[m.rotation(h)] != m.rotation(p[h]))
            throw Error(ErrorKind::InvalidAutomorphism, "does not commute with the vertex rotation");
        if (t.color_of_half_edge(h) != t.color_of_half_edge(p[h]))
            throw Error(ErrorKind::InvalidAutomorphism, "does not preserve the coloring");
    }
    check_order({p}, phi.order);
}

QuiverAutomorphism induced_automorphism(const BraneTiling& t, const DualQuiver& dual, const TilingAutomorphism& phi) {
    validate_automorphism(t, phi);
    const CombinatorialMap& m = t.map;
    QuiverAutomorphism out;
    out.vertex_perm.assign(m.face_count(), -1);
    for (int f = 0; f < m.face_count(); ++f) out.vertex_perm[f] = m.face_of(phi.half_edge_perm[m.face_cycles()[f][0]]);
    out.arrow_perm.assign(dual.quiver.arrow_count(), -1);
    for (int a = 0; a < dual.quiver.arrow_count(); ++a) {
        int e = dual.edge_of_arrow[a];
        int image = m.edge_of(phi.half_edge_perm[m.edge_half_edges(e).first]);
        out.arrow_perm[a] = dual.arrow_of_edge[image];
    }
    // the order on the quiver can only drop if phi fixes every edge, which
    // together with color preservation forces phi to be the identity
    out.order = phi.order;
    validate_automorphism(dual.quiver, out);
    return out;
}

OrbitSizes orbit_sizes(const Quiver& q, const QuiverAutomorphism& phi) {
    validate_automorphism(q, phi);
    OrbitSizes out;
    out.size.assign(q.vertex_count(), 0);
    out.all_full = true;
    for (int v = 0; v < q.vertex_count(); ++v) {
        int k = 1;
        for (int x = phi.vertex_perm[v]; x != v; x = phi.vertex_perm[x]) ++k;
        out.size[v] = k;
        out.all_full = out.all_full && k == phi.order;
    }
    return out;
}

namespace {

std::vector<std::vector<int>> cycles_of(const std::vector<int>& perm) {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(perm.size(), 0);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        std::vector<int> cyc;
        for (int x = static_cast<int>(i); !seen[x]; x = perm[x]) {
            seen[x] = 1;
            cyc.push_back(x);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

std::string fresh_name(const Quiver& q, std::string name) {
    while (q.find_arrow(name)) name += "'";
    return name;
}

} // namespace

OrbitChoice default_choice(const Quiver& q, const QuiverAutomorphism& phi) {
    OrbitChoice choice;
    std::vector<char> is_base(q.vertex_count(), 0);
    for (const auto& orbit : cycles_of(phi.vertex_perm)) {
        int base = *std::min_element(orbit.begin(), orbit.end());
        choice.bases.push_back(base);
        is_base[base] = 1;
    }
    for (const auto& orbit : cycles_of(phi.arrow_perm)) {
        int pick = -1;
        for (int a : orbit)
            if (is_base[q.arrow(a).source] && (pick < 0 || a < pick)) pick = a;
        if (pick < 0) pick = *std::min_element(orbit.begin(), orbit.end());
        choice.generators.push_back(pick);
    }
    return choice;
}

SemidirectQuiver build_orbit_quiver(const Quiver& q, const QuiverAutomorphism& phi, const OrbitChoice& choice) {
    OrbitSizes sizes = orbit_sizes(q, phi);
    if (!sizes.all_full)
        throw Error(ErrorKind::OrbitSizeViolation, "every vertex orbit must have size " + std::to_string(phi.order));
    SemidirectQuiver ctx;
    ctx.q = q;
    ctx.phi = phi;
    ctx.choice = choice;
    ctx.n = phi.order;

    // vertex orbits, each listed from its chosen base
    auto vorbits = cycles_of(phi.vertex_perm);
    if (choice.bases.size() != vorbits.size())
        throw Error(ErrorKind::BadChoice, "need exactly one base vertex per vertex orbit");
    ctx.orbit_of_vertex.assign(q.vertex_count(), -1);
    ctx.position_of_vertex.assign(q.vertex_count(), -1);
    for (int base : choice.bases) {
        if (base < 0 || base >= q.vertex_count()) throw Error(ErrorKind::BadChoice, "unknown base vertex");
        if (ctx.orbit_of_vertex[base] != -1) throw Error(ErrorKind::BadChoice, "two bases in one vertex orbit");
        int k = static_cast<int>(ctx.vertex_orbits.size());
        std::vector<int> chain;
        int x = base;
        for (int t = 0; t < ctx.n; ++t, x = phi.vertex_perm[x]) {
            chain.push_back(x);
            ctx.orbit_of_vertex[x] = k;
            ctx.position_of_vertex[x] = t;
        }
        ctx.vertex_orbits.push_back(std::move(chain));
    }

    auto aorbits = cycles_of(phi.arrow_perm);
    if (choice.generators.size() != aorbits.size())
        throw Error(ErrorKind::BadChoice, "need exactly one generator per arrow orbit");
    ctx.generator_of_arrow.assign(q.arrow_count(), -1);
    ctx.power_of_arrow.assign(q.arrow_count(), -1);
    ctx.prime_of_generator.assign(q.arrow_count(), -1);
    for (const auto& v : q.vertex_names()) ctx.qprime.add_vertex(v);
    std::vector<int> sorted_generators = choice.generators;
    std::sort(sorted_generators.begin(), sorted_generators.end());
    for (int g : sorted_generators) {
        if (g < 0 || g >= q.arrow_count()) throw Error(ErrorKind::BadChoice, "unknown generator arrow");
        if (ctx.generator_of_arrow[g] != -1)
            throw Error(ErrorKind::BadChoice, "two generators in the orbit of " + q.arrow(g).name);
        int x = g;
        for (int k = 0; k < ctx.n; ++k, x = phi.arrow_perm[x]) {
            ctx.generator_of_arrow[x] = g;
            ctx.power_of_arrow[x] = k;
        }
        const Arrow& a = q.arrow(g);
        ctx.prime_of_generator[g] = ctx.qprime.add_arrow(a.name, a.source, a.target);
        ctx.q_of_prime.push_back(g);
        ctx.degree.push_back(0);
    }

    const int total_iso = (ctx.n - 1) * static_cast<int>(ctx.vertex_orbits.size());
    for (std::size_t k = 0; k < ctx.vertex_orbits.size(); ++k) {
        std::vector<int> ids;
        for (int t = 0; t + 1 < ctx.n; ++t) {
            std::string name = total_iso == 1 ? "r" : "r" + std::to_string(k + 1) + "_" + std::to_string(t);
            name = fresh_name(ctx.qprime, name);
            ids.push_back(ctx.qprime.add_arrow(name, ctx.vertex_orbits[k][t], ctx.vertex_orbits[k][t + 1], true));
            ctx.q_of_prime.push_back(-1);
            ctx.degree.push_back(1);
        }
        ctx.iso_arrows.push_back(std::move(ids));
    }
    return ctx;
}

Word iso_path(const SemidirectQuiver& ctx, int u, int v) {
    int k = ctx.orbit_of_vertex[u];
    if (k != ctx.orbit_of_vertex[v]) throw Error(ErrorKind::NonComposable, "vertices lie in different orbits");
    int pu = ctx.position_of_vertex[u], pv = ctx.position_of_vertex[v];
    Word w = constant_path(u);
    w.target = v;
    const auto& r = ctx.iso_arrows[k];
    if (pu < pv)
        for (int t = pv - 1; t >= pu; --t) w.letters.push_back(Letter{r[t], 1});
    else
        for (int t = pv; t < pu; ++t) w.letters.push_back(Letter{r[t], -1});
    return w;
}

Word xi_arrow(const SemidirectQuiver& ctx, int arrow) {
    const Arrow& x = ctx.q.arrow(arrow);
    int g = ctx.generator_of_arrow[arrow];
    const Arrow& a = ctx.q.arrow(g);
    Word qx = iso_path(ctx, x.source, a.source);
    Word px = iso_path(ctx, a.target, x.target);
    Word mid = arrow_word(ctx.qprime, ctx.prime_of_generator[g]);
    return *compose(ctx.qprime, px, *compose(ctx.qprime, mid, qx));
}

Word xi_embed(const SemidirectQuiver& ctx, const Word& path) {
    Word out = constant_path(path.source);
    for (auto it = path.letters.rbegin(); it != path.letters.rend(); ++it) {
        if (it->exp != 1) throw Error(ErrorKind::MalformedWord, "xi is defined on paths of Q");
        auto next = compose(ctx.qprime, xi_arrow(ctx, it->arrow), out);
        if (!next) throw Error(ErrorKind::NonComposable, "path does not compose in Q");
        out = *next;
    }
    return out;
}

Element xi_element(const SemidirectQuiver& ctx, const Element& x) {
    Element out;
    for (const auto& [w, c] : x.terms()) out.add(xi_embed(ctx, w), c);
    return out;
}

int word_degree(const SemidirectQuiver& ctx, const Word& w) {
    int d = 0;
    for (const Letter& l : w.letters) d += ctx.degree.at(l.arrow) * l.exp;
    return d;
}

Factorization factor_word(const SemidirectQuiver& ctx, const Word& w) {
    int cur = w.source;
    std::vector<Letter> rev;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if (it->arrow < 0 || it->arrow >= ctx.qprime.arrow_count()) throw Error(ErrorKind::MalformedWord, "unknown letter");
        if (ctx.is_iso(it->arrow)) continue;
        if (it->exp != 1) throw Error(ErrorKind::MalformedWord, "generating arrows cannot be inverted");
        int g = ctx.q_of_prime[it->arrow];
        int x = g;
        for (int k = 0; k < ctx.n && ctx.q.arrow(x).source != cur; ++k) x = ctx.phi.arrow_perm[x];
        if (ctx.q.arrow(x).source != cur) throw Error(ErrorKind::MalformedWord, "letter leaves its vertex orbit");
        rev.push_back(Letter{x, 1});
        cur = ctx.q.arrow(x).target;
    }
    Factorization f;
    f.path = Word{w.source, cur, std::vector<Letter>(rev.rbegin(), rev.rend())};
    f.iso = iso_path(ctx, cur, w.target);
    auto back = compose(ctx.qprime, f.iso, xi_embed(ctx, f.path));
    if (!back || *back != normalize(ctx.qprime, w)) throw Error(ErrorKind::MalformedWord, "word does not factor");
    return f;
}

TransportResult transport_potential(const SemidirectQuiver& ctx, const Potential& w) {
    TransportResult out;
    for (const auto& [cycle, c] : w.terms()) out.potential.add_cycle(ctx.qprime, xi_embed(ctx, cycle), c);
    std::set<int> positive, negative;
    std::set<int> degrees;
    for (const auto& [cycle, c] : out.potential.terms()) {
        degrees.insert(word_degree(ctx, cycle));
        for (const Letter& l : cycle.letters)
            if (ctx.is_iso(l.arrow)) (l.exp > 0 ? positive : negative).insert(l.arrow);
    }
    for (int r : positive)
        if (negative.count(r))
            throw Error(ErrorKind::MixedInverseViolation,
                        "W' contains both " + ctx.qprime.arrow(r).name + " and its inverse");
    out.inverse_free = negative.empty();
    out.homogeneous = degrees.size() <= 1;
    out.degree = degrees.empty() ? 0 : *degrees.begin();
    return out;
}

TransportCheck verify_transport_identity(const SemidirectQuiver& ctx, const Potential& w, const Potential& wprime,
                                         int prime_arrow) {
    if (prime_arrow < 0 || prime_arrow >= ctx.qprime.arrow_count() || ctx.is_iso(prime_arrow))
        throw Error(ErrorKind::UnknownArrow, "not a generating arrow of Q'");
    TransportCheck out;
    out.arrow = ctx.qprime.arrow(prime_arrow).name;
    Element a_prime = Element::from_word(arrow_word(ctx.qprime, prime_arrow));
    out.lhs = multiply(ctx.qprime, a_prime, cyclic_derivative(ctx.qprime, wprime, prime_arrow));
    int a = ctx.q_of_prime[prime_arrow];
    Element a_q = Element::from_word(arrow_word(ctx.q, a));
    out.rhs = xi_element(ctx, multiply(ctx.q, a_q, cyclic_derivative(ctx.q, w, a)));
    out.rhs *= ctx.n;
    out.witness = out.lhs - out.rhs;
    out.pass = out.witness.is_zero();
    return out;
}

bool common_source_rule(const SemidirectQuiver& ctx) {
    std::vector<int> source_of_orbit(ctx.vertex_orbits.size(), -1);
    for (int g : ctx.choice.generators) {
        int s = ctx.q.arrow(g).source;
        int k = ctx.orbit_of_vertex[s];
        if (source_of_orbit[k] == -1) source_of_orbit[k] = s;
        if (source_of_orbit[k] != s) return false;
    }
    return true;
}

ChoiceSearch choose_homogeneous_xi(const Quiver& q, const Potential& w, const QuiverAutomorphism& phi,
                                   const std::vector<int>& dimer_arrows) {
    OrbitSizes sizes = orbit_sizes(q, phi);
    if (!sizes.all_full) throw Error(ErrorKind::OrbitSizeViolation, "refine the tiling first");
    const int n = phi.order;
    std::set<int> dimer(dimer_arrows.begin(), dimer_arrows.end());
    auto vorbits = cycles_of(phi.vertex_perm);
    auto aorbits = cycles_of(phi.arrow_perm);
    std::vector<int> orbit_of(q.vertex_count());
    for (std::size_t k = 0; k < vorbits.size(); ++k) {
        std::sort(vorbits[k].begin(), vorbits[k].end());
        for (int v : vorbits[k]) orbit_of[v] = static_cast<int>(k);
    }

    ChoiceSearch result;
    OrbitChoice choice;
    choice.bases.assign(vorbits.size(), -1);
    choice.generators.assign(aorbits.size(), -1);
    std::vector<int> source_of_orbit(vorbits.size(), -1);
    bool found = false;

    auto accept = [&]() {
        ++result.examined;
        SemidirectQuiver ctx = build_orbit_quiver(q, phi, choice);
        if (n > 1) {
            for (int a = 0; a < q.arrow_count(); ++a) {
                int d = word_degree(ctx, xi_arrow(ctx, a));
                if (d != (dimer.count(a) ? n : 0)) return false;
            }
        }
        try {
            transport_potential(ctx, w);
        } catch (const Error&) {
            return false;
        }
        return true;
    };

    std::function<void(std::size_t)> pick_generator = [&](std::size_t i) {
        if (found) return;
        if (i == aorbits.size()) {
            if (accept()) found = true;
            return;
        }
        std::vector<int> candidates = aorbits[i];
        std::sort(candidates.begin(), candidates.end(), [&](int x, int y) {
            bool bx = q.arrow(x).source == choice.bases[orbit_of[q.arrow(x).source]];
            bool by = q.arrow(y).source == choice.bases[orbit_of[q.arrow(y).source]];
            if (bx != by) return bx;
            return x < y;
        });
        for (int g : candidates) {
            int s = q.arrow(g).source;
            int k = orbit_of[s];
            if (source_of_orbit[k] != -1 && source_of_orbit[k] != s) continue;
            bool fresh = source_of_orbit[k] == -1;
            if (fresh) source_of_orbit[k] = s;
            choice.generators[i] = g;
            pick_generator(i + 1);
            if (fresh) source_of_orbit[k] = -1;
            if (found) return;
        }
    };

    std::function<void(std::size_t)> pick_base = [&](std::size_t k) {
        if (found) return;
        if (k == vorbits.size()) {
            pick_generator(0);
            return;
        }
        for (int b : vorbits[k]) {
            choice.bases[k] = b;
            pick_base(k + 1);
            if (found) return;
        }
    };

    pick_base(0);
    if (!found)
        throw Error(ErrorKind::NoChoiceFound, "no orbit choice satisfies the degree conditions (" +
                                                  std::to_string(result.examined) + " candidates examined)");
    result.choice = choice;
    return result;
}

} // namespace tessella
