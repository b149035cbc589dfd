#pragma once

#include "tessella/pathalg.hpp"
#include "tessella/surfacemap.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tessella {

struct QuiverAutomorphism {
    std::vector<int> vertex_perm;
    std::vector<int> arrow_perm;
    int order = 1;
};

struct TilingAutomorphism {
    std::vector<int> half_edge_perm;
    int order = 1;
};

QuiverAutomorphism identity_automorphism(const Quiver& q);
TilingAutomorphism identity_automorphism(const BraneTiling& t);
void validate_automorphism(const Quiver& q, const QuiverAutomorphism& phi);
void validate_automorphism(const BraneTiling& t, const TilingAutomorphism& phi);
QuiverAutomorphism induced_automorphism(const BraneTiling& t, const DualQuiver& dual, const TilingAutomorphism& phi);

struct OrbitSizes {
    std::vector<int> size; // per vertex
    bool all_full = false; // every orbit has size n
};

OrbitSizes orbit_sizes(const Quiver& q, const QuiverAutomorphism& phi);

struct RefineResult {
    BraneTiling tiling;
    TilingAutomorphism phi;
    int added_vertices = 0;
    int added_edges = 0;
};

RefineResult refine_tiling(const BraneTiling& tiling, const TilingAutomorphism& phi);

struct DimerResult {
    BraneTiling tiling;
    TilingAutomorphism phi;
    std::vector<int> edges; // perfect matching, sorted tiling edge ids
    int added_vertices = 0;
    int added_edges = 0;
};

DimerResult equivariant_dimer(const BraneTiling& tiling, const TilingAutomorphism& phi);

struct OrbitChoice {
    std::vector<int> generators; // one arrow of Q per arrow orbit
    std::vector<int> bases;      // one vertex of Q per vertex orbit
};

// Q' together with everything needed to move between Q and Q'.
struct SemidirectQuiver {
    Quiver q;
    QuiverAutomorphism phi;
    OrbitChoice choice;
    int n = 1;

    Quiver qprime;           // same vertices; generators first, then iso arrows
    std::vector<int> degree; // per arrow of qprime

    std::vector<std::vector<int>> vertex_orbits; // orbit k: base, phi(base), ...
    std::vector<int> orbit_of_vertex;
    std::vector<int> position_of_vertex;
    std::vector<std::vector<int>> iso_arrows;   // per vertex orbit, qprime ids r_0..r_{n-2}
    std::vector<int> generator_of_arrow;        // Q arrow -> Q arrow generating its orbit
    std::vector<int> power_of_arrow;            // a = phi^k(generator)
    std::vector<int> prime_of_generator;        // Q arrow -> qprime id (-1 unless generator)
    std::vector<int> q_of_prime;                // qprime arrow -> Q arrow (-1 for iso arrows)

    bool is_iso(int prime_arrow) const { return q_of_prime[prime_arrow] < 0; }
};

SemidirectQuiver build_orbit_quiver(const Quiver& q, const QuiverAutomorphism& phi, const OrbitChoice& choice);
// Default choice: base = lowest vertex of each orbit, generator = the orbit
// arrow whose source is a base vertex, lowest id first.
OrbitChoice default_choice(const Quiver& q, const QuiverAutomorphism& phi);

// The unique word in iso arrows from u to v (same vertex orbit).
Word iso_path(const SemidirectQuiver& ctx, int u, int v);
Word xi_arrow(const SemidirectQuiver& ctx, int arrow);
Word xi_embed(const SemidirectQuiver& ctx, const Word& path);
Element xi_element(const SemidirectQuiver& ctx, const Element& x);
int word_degree(const SemidirectQuiver& ctx, const Word& w);

struct Factorization {
    Word iso;  // word in qprime, iso arrows only
    Word path; // path in q
};

Factorization factor_word(const SemidirectQuiver& ctx, const Word& w);

struct TransportResult {
    Potential potential;
    bool homogeneous = false;
    int degree = 0;           // common degree when homogeneous
    bool inverse_free = true; // no iso arrow appears inverted
};

TransportResult transport_potential(const SemidirectQuiver& ctx, const Potential& w);

struct TransportCheck {
    bool pass = false;
    std::string arrow;
    Element lhs;
    Element rhs;
    Element witness; // lhs - rhs
};

// a * dW'/da == n * xi(a * dW/da), for a generating arrow of Q'.
TransportCheck verify_transport_identity(const SemidirectQuiver& ctx, const Potential& w, const Potential& wprime,
                                         int prime_arrow);

struct ChoiceSearch {
    OrbitChoice choice;
    std::size_t examined = 0;
};

// Exhaustive search for a choice meeting the common-source rule and
// giving dimer arrows degree n and all others degree 0.  Throws NoChoiceFound.
ChoiceSearch choose_homogeneous_xi(const Quiver& q, const Potential& w, const QuiverAutomorphism& phi,
                                   const std::vector<int>& dimer_arrows);

bool common_source_rule(const SemidirectQuiver& ctx);

} // namespace tessella
