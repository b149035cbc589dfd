#pragma once

#include "tessella/equivariant.hpp"
#include "tessella/pathalg.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tessella {

// A group word is a list of nonzero ints: +(g+1) for generator g, -(g+1)
// for its inverse.  Words multiply by concatenation; like quiver words,
// the rightmost letter acts first.
using GroupWord = std::vector<int>;

struct Alphabet {
    std::vector<std::string> names;

    int size() const { return static_cast<int>(names.size()); }
    int id(const std::string& name) const; // throws InvalidInput
    std::optional<int> find(const std::string& name) const;
};

GroupWord free_reduce(const GroupWord& w);
GroupWord inverse(const GroupWord& w);
GroupWord concat(const GroupWord& a, const GroupWord& b);
GroupWord cyclic_reduce(const GroupWord& w);
// Smallest rotation of the cyclic reduction of w or of its inverse.
GroupWord canonical_relator(const GroupWord& w);
// Letters separated by spaces or run together (greedy longest name);
// "^-1" inverts the preceding letter; "1" and "" are the empty word.
GroupWord parse_group_word(const Alphabet& alphabet, std::string_view text);
std::string format_group_word(const Alphabet& alphabet, const GroupWord& w);
// Replaces every letter by a word (images[g] for generator g).
GroupWord substitute_letters(const GroupWord& w, const std::vector<GroupWord>& images);

struct SurfacePresentation {
    int genus = 2;
    Alphabet alphabet; // x1, y1, ..., xg, yg
    GroupWord relator; // [x1,y1]...[xg,yg]

    static SurfacePresentation standard(int genus); // throws GenusTooSmall for g <= 1
};

GroupWord dehn_reduce(const GroupWord& w, const SurfacePresentation& pres);
bool dehn_trivial(const GroupWord& w, const SurfacePresentation& pres);

struct PhiAction {
    std::vector<GroupWord> forward;  // image of each generator
    std::vector<GroupWord> backward; // image under the inverse action
    int order = 1;
};

// Builds the action from generator -> word text; the inverse is the
// (order-1)-th power.  Throws InvalidInput for unknown names.
PhiAction phi_action_from_map(const SurfacePresentation& pres, const std::map<std::string, std::string>& images,
                              int order);
// Checks that phi^order fixes each generator and that the relator maps to
// a trivial word.  Returns the list of problems (empty when valid).
std::vector<std::string> validate_phi_action(const SurfacePresentation& pres, const PhiAction& phi);

// A group with a distinguished automorphism, as seen by the semidirect
// product.  `reduce` picks a representative, `trivial` decides w == 1.
struct GroupModel {
    Alphabet alphabet;
    std::function<GroupWord(const GroupWord&)> reduce;
    std::function<bool(const GroupWord&)> trivial;
    std::function<GroupWord(const GroupWord&)> phi;
    std::function<GroupWord(const GroupWord&)> phi_inverse;
};

GroupModel surface_model(const SurfacePresentation& pres, const PhiAction& phi);

struct SemidirectElement {
    GroupWord word;
    long power = 0;

    bool operator==(const SemidirectElement&) const = default;
};

GroupWord phi_power(const GroupModel& model, const GroupWord& w, long k);
// (a, l) (b, m) = (a phi^l(b), l + m)
SemidirectElement multiply(const GroupModel& model, const SemidirectElement& x, const SemidirectElement& y);
SemidirectElement invert(const GroupModel& model, const SemidirectElement& x);
SemidirectElement semidirect_normalize(const GroupModel& model, const SemidirectElement& x);
bool same_element(const GroupModel& model, const SemidirectElement& x, const SemidirectElement& y);
std::string format_semidirect(const GroupModel& model, const SemidirectElement& x);

// Bounded search for a way to write w as a product of at most
// `max_conjugates` conjugates of the relators (and their inverses).
// Returns the number used, or nothing if the search gives up.
std::optional<int> certify_trivial(const GroupWord& w, const std::vector<GroupWord>& relators, int max_conjugates,
                                   std::size_t state_cap = 200000);

struct MatrixUnitElement {
    int row = 0; // target vertex
    int col = 0; // source vertex
    SemidirectElement value;
    Rational coeff = 1;
};

// Generator images for the map from the localized Jacobi algebra of Q'.
struct PsiSetup {
    GroupModel model;
    std::vector<SemidirectElement> image; // per arrow of Q'
    int basepoint = 0;
    std::vector<int> tree;          // arrows of Q
    std::vector<GroupWord> tree_path; // per vertex, as a word in the arrows of Q
    std::vector<GroupWord> relators;  // face boundaries (certificate mode)
    int max_conjugates = 8;
    bool certificate = true;
};

// Spanning tree of Q from arrows whose xi-image has degree 0 (lowest ids
// first unless given) and basepoint = lowest vertex touching an iso arrow
// (unless given).  Group elements are loops in Q modulo the potential's
// cycles; phi acts through the arrow permutation conjugated by the tree
// path to phi(basepoint).
PsiSetup certificate_setup(const SemidirectQuiver& ctx, const Potential& w, std::optional<std::vector<int>> tree = {},
                           std::optional<int> basepoint = {}, int max_conjugates = 8);

struct DehnConfig {
    SurfacePresentation pres;
    PhiAction phi;
    std::map<std::string, std::string> arrow_classes; // Q' arrow name -> surface word
    std::vector<std::string> tree;
    std::string basepoint;
};

PsiSetup dehn_setup(const SemidirectQuiver& ctx, const DehnConfig& config);

MatrixUnitElement psi_eval(const SemidirectQuiver& ctx, const PsiSetup& setup, const Word& w);

struct PsiArrowReport {
    std::string arrow;
    bool pass = false;
    std::string detail;
    int conjugates = 0; // certificate size used (certificate mode)
};

struct PsiReport {
    bool pass = false;
    std::string mode;
    std::vector<PsiArrowReport> arrows;
};

PsiReport verify_psi_relations(const SemidirectQuiver& ctx, const Potential& wprime, const PsiSetup& setup);

// ---- derivation scripts ----

struct Identity {
    GroupWord lhs;
    GroupWord rhs;
};

struct ScriptStep {
    std::string id;
    std::string kind; // substitute | rewrite | multiply | cancel
    std::string from; // step id, or "rel:<arrow>"
    std::string using_ref;
    bool forward = true;
    std::string word; // multiply
    bool left = true; // multiply
    std::string claim;
    std::string label; // optional name for an established identity
};

struct ScriptTarget {
    std::string name;
    std::string identity; // "L = R", in the target alphabet
};

struct DerivationScript {
    std::vector<std::string> contract; // arrows set to 1
    std::vector<ScriptStep> steps;
    std::vector<std::string> target_alphabet;
    std::map<std::string, std::string> translate; // target letter -> word over the arrows
    std::vector<ScriptTarget> targets;
};

struct ScriptStepResult {
    std::string id;
    bool ok = false;
    std::string message;
};

struct ScriptReport {
    bool valid = false;
    int first_failure = -1;
    std::vector<ScriptStepResult> steps;
    std::vector<std::string> established;      // labels of verified steps
    std::vector<std::string> targets_met;      // target names
    std::vector<std::string> targets_missing;
};

// One identity per arrow of Q', read from the binomial derivative of W'
// with the contracted arrows deleted.
std::map<std::string, Identity> script_relations(const Quiver& q, const Potential& w,
                                                 const std::vector<std::string>& contract, Alphabet& alphabet);
ScriptReport check_derivation_script(const Quiver& q, const Potential& w, const DerivationScript& script);

} // namespace tessella
