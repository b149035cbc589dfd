#pragma once

#include "tessella/pathalg.hpp"
#include "tessella/surfacemap.hpp"
#include "tessella/equivariant.hpp"
#include "tessella/presentation.hpp"

#include "json.hpp"

#include <string>
#include <utility>

namespace tessella {

using Json = nlohmann::json;

Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
// Stable rendering: sorted keys, two-space indent, trailing newline.
std::string dump_json(const Json& j);

BraneTiling tiling_from_json(const Json& j);
Json tiling_to_json(const BraneTiling& tiling);

Json quiver_to_json(const Quiver& q);
Quiver quiver_from_json(const Json& j);
Json word_to_json(const Quiver& q, const Word& w);
Word word_from_json(const Quiver& q, const Json& j);
Json element_to_json(const Quiver& q, const Element& x);
// Accepts either a term list or a compact string.
Element element_from_json(const Quiver& q, const Json& j);
Json potential_to_json(const Quiver& q, const Potential& w);
Potential potential_from_json(const Quiver& q, const Json& j);

// {"vertices", "arrows", "potential"}
Json qpot_to_json(const Quiver& q, const Potential& w);
std::pair<Quiver, Potential> qpot_from_json(const Json& j);

// {"order", "half_edge_perm"}
TilingAutomorphism tiling_automorphism_from_json(const Json& j);
Json tiling_automorphism_to_json(const TilingAutomorphism& phi);
// {"order", "vertex_perm", "arrow_perm"}; both perms by name or by index
QuiverAutomorphism quiver_automorphism_from_json(const Quiver& q, const Json& j);
Json quiver_automorphism_to_json(const Quiver& q, const QuiverAutomorphism& phi);

// {"genus", "order", "phi_star": {gen: word}, "arrow_classes": {arrow: word},
//  "tree": [arrow...], "basepoint": vertex}
DehnConfig dehn_config_from_json(const Json& j);
// {"contract", "steps": [...], "target_alphabet", "translate", "targets"}
DerivationScript derivation_script_from_json(const Json& j);
Json psi_report_to_json(const PsiReport& r);
Json script_report_to_json(const ScriptReport& r);

} // namespace tessella
