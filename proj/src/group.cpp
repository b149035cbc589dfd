#include "tessella/presentation.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <deque>
#include <set>

namespace tessella {

int Alphabet::id(const std::string& name) const {
    if (auto g = find(name)) return *g;
    throw Error(ErrorKind::InvalidInput, "unknown generator '" + name + "'");
}

std::optional<int> Alphabet::find(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<int>(it - names.begin());
}

GroupWord free_reduce(const GroupWord& w) {
    GroupWord out;
    out.reserve(w.size());
    for (int x : w) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

GroupWord inverse(const GroupWord& w) {
    GroupWord out(w.rbegin(), w.rend());
    for (int& x : out) x = -x;
    return out;
}

GroupWord concat(const GroupWord& a, const GroupWord& b) {
    GroupWord out = a;
    out.insert(out.end(), b.begin(), b.end());
    return free_reduce(out);
}

GroupWord cyclic_reduce(const GroupWord& w) {
    GroupWord r = free_reduce(w);
    std::size_t lo = 0, hi = r.size();
    while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
        ++lo;
        --hi;
    }
    return GroupWord(r.begin() + lo, r.begin() + hi);
}

GroupWord canonical_relator(const GroupWord& w) {
    GroupWord best;
    bool have = false;
    for (const GroupWord& v : {cyclic_reduce(w), cyclic_reduce(inverse(w))}) {
        for (std::size_t k = 0; k < std::max<std::size_t>(v.size(), 1); ++k) {
            GroupWord r(v.begin() + k, v.end());
            r.insert(r.end(), v.begin(), v.begin() + k);
            if (!have || r < best) {
                best = r;
                have = true;
            }
        }
    }
    return best;
}

GroupWord parse_group_word(const Alphabet& alphabet, std::string_view text) {
    GroupWord out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '*' || text[i] == '.')) ++i;
    };
    skip();
    if (text.substr(i) == "1") return out;
    while (i < text.size()) {
        int best = -1;
        std::size_t best_len = 0;
        for (int g = 0; g < alphabet.size(); ++g) {
            const std::string& n = alphabet.names[g];
            if (n.size() > best_len && text.substr(i, n.size()) == n) {
                best = g;
                best_len = n.size();
            }
        }
        if (best < 0) throw Error(ErrorKind::MalformedWord, "cannot read group word at '" + std::string(text.substr(i)) + "'");
        i += best_len;
        int letter = best + 1;
        if (text.substr(i, 3) == "^-1") {
            letter = -letter;
            i += 3;
        } else if (text.substr(i, 2) == "^1") {
            i += 2;
        }
        out.push_back(letter);
        skip();
    }
    return free_reduce(out);
}

std::string format_group_word(const Alphabet& alphabet, const GroupWord& w) {
    if (w.empty()) return "1";
    bool spaced = std::any_of(alphabet.names.begin(), alphabet.names.end(), [](const std::string& n) { return n.size() > 1; });
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (spaced && k) out += ' ';
        out += alphabet.names.at(std::abs(w[k]) - 1);
        if (w[k] < 0) out += "^-1";
    }
    return out;
}

GroupWord substitute_letters(const GroupWord& w, const std::vector<GroupWord>& images) {
    GroupWord out;
    for (int x : w) {
        const GroupWord& img = images.at(std::abs(x) - 1);
        if (x > 0)
            out.insert(out.end(), img.begin(), img.end());
        else {
            GroupWord inv = inverse(img);
            out.insert(out.end(), inv.begin(), inv.end());
        }
    }
    return free_reduce(out);
}

SurfacePresentation SurfacePresentation::standard(int genus) {
    if (genus <= 1) throw Error(ErrorKind::GenusTooSmall, "Dehn's algorithm needs genus at least 2");
    SurfacePresentation p;
    p.genus = genus;
    for (int i = 1; i <= genus; ++i) {
        p.alphabet.names.push_back("x" + std::to_string(i));
        p.alphabet.names.push_back("y" + std::to_string(i));
    }
    for (int i = 0; i < genus; ++i) {
        int x = 2 * i + 1, y = 2 * i + 2;
        p.relator.insert(p.relator.end(), {x, y, -x, -y});
    }
    return p;
}

namespace {

std::vector<GroupWord> rotations_of(const std::vector<GroupWord>& relators) {
    std::vector<GroupWord> out;
    std::set<GroupWord> seen;
    for (const GroupWord& base : relators) {
        for (const GroupWord& r : {cyclic_reduce(base), cyclic_reduce(inverse(base))}) {
            for (std::size_t k = 0; k < r.size(); ++k) {
                GroupWord rot(r.begin() + k, r.end());
                rot.insert(rot.end(), r.begin(), r.begin() + k);
                if (seen.insert(rot).second) out.push_back(std::move(rot));
            }
        }
    }
    return out;
}

} // namespace

GroupWord dehn_reduce(const GroupWord& input, const SurfacePresentation& pres) {
    if (pres.genus <= 1) throw Error(ErrorKind::GenusTooSmall, "Dehn's algorithm needs genus at least 2");
    static thread_local std::map<GroupWord, std::vector<GroupWord>> cache;
    auto it = cache.find(pres.relator);
    if (it == cache.end()) it = cache.emplace(pres.relator, rotations_of({pres.relator})).first;
    const std::vector<GroupWord>& rots = it->second;
    const std::size_t len = pres.relator.size();

    GroupWord w = free_reduce(input);
    for (;;) {
        bool changed = false;
        for (std::size_t i = 0; i < w.size() && !changed; ++i) {
            // leftmost position, longest match there
            std::size_t best_k = 0;
            const GroupWord* best = nullptr;
            for (const GroupWord& rot : rots) {
                std::size_t k = 0;
                while (k < len && i + k < w.size() && w[i + k] == rot[k]) ++k;
                if (2 * k > len && k > best_k) {
                    best_k = k;
                    best = &rot;
                }
            }
            if (!best) continue;
            GroupWord rest(best->begin() + best_k, best->end());
            GroupWord next(w.begin(), w.begin() + i);
            GroupWord inv = inverse(rest);
            next.insert(next.end(), inv.begin(), inv.end());
            next.insert(next.end(), w.begin() + i + best_k, w.end());
            w = free_reduce(next);
            changed = true;
        }
        if (!changed) return w;
    }
}

bool dehn_trivial(const GroupWord& w, const SurfacePresentation& pres) { return dehn_reduce(w, pres).empty(); }

PhiAction phi_action_from_map(const SurfacePresentation& pres, const std::map<std::string, std::string>& images,
                              int order) {
    if (order < 1) throw Error(ErrorKind::InvalidInput, "order must be positive");
    PhiAction phi;
    phi.order = order;
    phi.forward.resize(pres.alphabet.size());
    for (int g = 0; g < pres.alphabet.size(); ++g) phi.forward[g] = GroupWord{g + 1};
    for (const auto& [name, text] : images) phi.forward[pres.alphabet.id(name)] = parse_group_word(pres.alphabet, text);
    // inverse action = phi^(order-1)
    std::vector<GroupWord> power(pres.alphabet.size());
    for (int g = 0; g < pres.alphabet.size(); ++g) power[g] = GroupWord{g + 1};
    for (int k = 1; k < order; ++k)
        for (auto& w : power) w = dehn_reduce(substitute_letters(w, phi.forward), pres);
    phi.backward = power;
    return phi;
}

std::vector<std::string> validate_phi_action(const SurfacePresentation& pres, const PhiAction& phi) {
    std::vector<std::string> problems;
    for (int g = 0; g < pres.alphabet.size(); ++g) {
        GroupWord w{g + 1};
        for (int k = 0; k < phi.order; ++k) w = dehn_reduce(substitute_letters(w, phi.forward), pres);
        if (!dehn_trivial(concat(w, GroupWord{-(g + 1)}), pres))
            problems.push_back("phi^" + std::to_string(phi.order) + " moves " + pres.alphabet.names[g]);
        GroupWord back = substitute_letters(substitute_letters(GroupWord{g + 1}, phi.forward), phi.backward);
        if (!dehn_trivial(concat(back, GroupWord{-(g + 1)}), pres))
            problems.push_back("inverse action fails on " + pres.alphabet.names[g]);
    }
    if (!dehn_trivial(substitute_letters(pres.relator, phi.forward), pres))
        problems.push_back("relator does not map to a trivial word");
    return problems;
}

GroupModel surface_model(const SurfacePresentation& pres, const PhiAction& phi) {
    GroupModel m;
    m.alphabet = pres.alphabet;
    m.reduce = [pres](const GroupWord& w) { return dehn_reduce(w, pres); };
    m.trivial = [pres](const GroupWord& w) { return dehn_trivial(w, pres); };
    m.phi = [pres, phi](const GroupWord& w) { return dehn_reduce(substitute_letters(w, phi.forward), pres); };
    m.phi_inverse = [pres, phi](const GroupWord& w) { return dehn_reduce(substitute_letters(w, phi.backward), pres); };
    return m;
}

GroupWord phi_power(const GroupModel& model, const GroupWord& w, long k) {
    GroupWord out = w;
    for (long j = 0; j < k; ++j) out = model.phi(out);
    for (long j = 0; j > k; --j) out = model.phi_inverse(out);
    return model.reduce(out);
}

SemidirectElement multiply(const GroupModel& model, const SemidirectElement& x, const SemidirectElement& y) {
    return SemidirectElement{model.reduce(concat(x.word, phi_power(model, y.word, x.power))), x.power + y.power};
}

SemidirectElement invert(const GroupModel& model, const SemidirectElement& x) {
    // (a, l)^-1 = (phi^-l(a^-1), -l)
    return SemidirectElement{phi_power(model, inverse(x.word), -x.power), -x.power};
}

SemidirectElement semidirect_normalize(const GroupModel& model, const SemidirectElement& x) {
    return SemidirectElement{model.reduce(x.word), x.power};
}

bool same_element(const GroupModel& model, const SemidirectElement& x, const SemidirectElement& y) {
    return x.power == y.power && model.trivial(concat(x.word, inverse(y.word)));
}

std::string format_semidirect(const GroupModel& model, const SemidirectElement& x) {
    return "([" + format_group_word(model.alphabet, x.word) + "], " + std::to_string(x.power) + ")";
}

std::optional<int> certify_trivial(const GroupWord& w, const std::vector<GroupWord>& relators, int max_conjugates,
                                   std::size_t state_cap) {
    GroupWord start = cyclic_reduce(w);
    if (start.empty()) return 0;
    const std::vector<GroupWord> rots = rotations_of(relators);

    // best-first over cyclic words, shortest first; each move multiplies by
    // one conjugate of a relator that overlaps the current word
    using Entry = std::tuple<std::size_t, int, GroupWord>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::map<GroupWord, int> best{{canonical_relator(start), 0}};
    open.emplace(start.size(), 0, start);
    while (!open.empty()) {
        auto [len, depth, cur] = open.top();
        open.pop();
        if (depth >= max_conjugates) continue;
        const std::size_t n = cur.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (const GroupWord& rot : rots) {
                std::size_t k = 0;
                while (k < rot.size() && k < n && cur[(i + k) % n] == rot[k]) ++k;
                for (std::size_t used = k; used >= 1; --used) {
                    // replace rot[0..used) by the inverse of the rest of rot
                    GroupWord cand = inverse(GroupWord(rot.begin() + used, rot.end()));
                    for (std::size_t j = used; j < n; ++j) cand.push_back(cur[(i + j) % n]);
                    cand = cyclic_reduce(cand);
                    if (cand.empty()) return depth + 1;
                    GroupWord key = canonical_relator(cand);
                    auto it = best.find(key);
                    if (it != best.end() && it->second <= depth + 1) continue;
                    best[key] = depth + 1;
                    if (best.size() > state_cap) return std::nullopt;
                    open.emplace(cand.size(), depth + 1, std::move(cand));
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace tessella
