#include "tessella/presentation.hpp"

#include <algorithm>
#include <set>

namespace tessella {

namespace {

Identity parse_identity(const Alphabet& alphabet, const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::MalformedWord, "identity needs '=': " + text);
    return Identity{parse_group_word(alphabet, text.substr(0, eq)), parse_group_word(alphabet, text.substr(eq + 1))};
}

bool same_identity(const Identity& a, const Identity& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }

GroupWord relator_of(const Identity& x) { return canonical_relator(concat(x.lhs, inverse(x.rhs))); }

std::vector<std::size_t> occurrences(const GroupWord& w, const GroupWord& p) {
    std::vector<std::size_t> out;
    if (p.empty() || p.size() > w.size()) return out;
    for (std::size_t i = 0; i + p.size() <= w.size(); ++i)
        if (std::equal(p.begin(), p.end(), w.begin() + i)) out.push_back(i);
    return out;
}

// Replaces the chosen occurrences (sorted, non-overlapping) of p by r.
GroupWord replace_at(const GroupWord& w, const std::vector<std::size_t>& at, std::size_t plen, const GroupWord& r) {
    GroupWord out;
    std::size_t pos = 0;
    for (std::size_t i : at) {
        out.insert(out.end(), w.begin() + pos, w.begin() + i);
        out.insert(out.end(), r.begin(), r.end());
        pos = i + plen;
    }
    out.insert(out.end(), w.begin() + pos, w.end());
    return free_reduce(out);
}

// Every result of replacing a nonempty set of non-overlapping occurrences.
bool some_replacement_matches(const Identity& src, const GroupWord& p, const GroupWord& r, const Identity& claim) {
    auto in_l = occurrences(src.lhs, p), in_r = occurrences(src.rhs, p);
    const std::size_t total = in_l.size() + in_r.size();
    if (total == 0 || total > 16) return false;
    for (std::size_t mask = 1; mask < (std::size_t{1} << total); ++mask) {
        std::vector<std::size_t> pick_l, pick_r;
        bool overlap = false;
        for (std::size_t k = 0; k < total; ++k) {
            if (!(mask & (std::size_t{1} << k))) continue;
            auto& side = k < in_l.size() ? pick_l : pick_r;
            std::size_t pos = k < in_l.size() ? in_l[k] : in_r[k - in_l.size()];
            if (!side.empty() && side.back() + p.size() > pos) overlap = true;
            side.push_back(pos);
        }
        if (overlap) continue;
        Identity out{replace_at(src.lhs, pick_l, p.size(), r), replace_at(src.rhs, pick_r, p.size(), r)};
        if (same_identity(out, claim)) return true;
    }
    return false;
}

} // namespace

std::map<std::string, Identity> script_relations(const Quiver& q, const Potential& w,
                                                 const std::vector<std::string>& contract, Alphabet& alphabet) {
    std::set<int> dropped;
    for (const auto& name : contract) dropped.insert(q.arrow_id(name));
    alphabet.names.clear();
    std::vector<int> letter_of(q.arrow_count(), 0);
    for (int a = 0; a < q.arrow_count(); ++a) {
        if (dropped.count(a)) continue;
        alphabet.names.push_back(q.arrow(a).name);
        letter_of[a] = alphabet.size();
    }
    auto convert = [&](const Word& word) {
        GroupWord g;
        for (const Letter& l : word.letters)
            if (letter_of[l.arrow]) g.push_back(l.exp * letter_of[l.arrow]);
        return free_reduce(g);
    };
    std::map<std::string, Identity> out;
    for (int a = 0; a < q.arrow_count(); ++a) {
        Element d = cyclic_derivative(q, w, a);
        if (d.terms().size() != 2) continue;
        auto first = d.terms().begin(), second = std::next(first);
        if (first->second != -second->second) continue;
        bool first_positive = first->second > 0;
        const Word& pos = first_positive ? first->first : second->first;
        const Word& neg = first_positive ? second->first : first->first;
        out[q.arrow(a).name] = Identity{convert(pos), convert(neg)};
    }
    return out;
}

ScriptReport check_derivation_script(const Quiver& q, const Potential& w, const DerivationScript& script) {
    ScriptReport report;
    Alphabet alphabet;
    std::map<std::string, Identity> relations = script_relations(q, w, script.contract, alphabet);
    std::map<std::string, Identity> proven;

    auto resolve = [&](const std::string& ref, std::string& why) -> const Identity* {
        if (ref.rfind("rel:", 0) == 0) {
            auto it = relations.find(ref.substr(4));
            if (it == relations.end()) {
                why = "no binomial relation for arrow " + ref.substr(4);
                return nullptr;
            }
            return &it->second;
        }
        auto it = proven.find(ref);
        if (it == proven.end()) {
            why = "step " + ref + " is not an earlier verified step";
            return nullptr;
        }
        return &it->second;
    };

    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const ScriptStep& st = script.steps[i];
        ScriptStepResult res;
        res.id = st.id;
        try {
            Identity claim = parse_identity(alphabet, st.claim);
            std::string why;
            const Identity* src = resolve(st.from, why);
            if (!src) throw Error(ErrorKind::InvalidInput, why);
            if (st.kind == "substitute" || st.kind == "rewrite") {
                bool rel_ref = st.using_ref.rfind("rel:", 0) == 0;
                if (rel_ref != (st.kind == "substitute"))
                    throw Error(ErrorKind::InvalidInput,
                                st.kind == "substitute" ? "substitute uses a relation (rel:<arrow>)"
                                                        : "rewrite uses an earlier step");
                const Identity* u = resolve(st.using_ref, why);
                if (!u) throw Error(ErrorKind::InvalidInput, why);
                const GroupWord& p = st.forward ? u->lhs : u->rhs;
                const GroupWord& r = st.forward ? u->rhs : u->lhs;
                res.ok = some_replacement_matches(*src, p, r, claim);
                if (!res.ok) res.message = "claim is not obtained by replacing occurrences of " + format_group_word(alphabet, p);
            } else if (st.kind == "multiply") {
                GroupWord u = parse_group_word(alphabet, st.word);
                Identity out = st.left ? Identity{concat(u, src->lhs), concat(u, src->rhs)}
                                       : Identity{concat(src->lhs, u), concat(src->rhs, u)};
                res.ok = same_identity(out, claim);
                if (!res.ok)
                    res.message = "multiplying gives " + format_group_word(alphabet, out.lhs) + " = " +
                                  format_group_word(alphabet, out.rhs);
            } else if (st.kind == "cancel") {
                res.ok = relator_of(*src) == relator_of(claim);
                if (!res.ok) res.message = "claim is not a rearrangement of " + st.from;
            } else {
                throw Error(ErrorKind::InvalidInput, "unknown step kind '" + st.kind + "'");
            }
            if (res.ok) {
                if (proven.count(st.id)) throw Error(ErrorKind::InvalidInput, "duplicate step id " + st.id);
                proven[st.id] = claim;
                res.message = "ok";
                if (!st.label.empty()) report.established.push_back(st.label);
            }
        } catch (const Error& e) {
            res.ok = false;
            res.message = e.what();
        }
        report.steps.push_back(res);
        if (!res.ok && report.first_failure < 0) report.first_failure = static_cast<int>(i);
        if (!res.ok) break;
    }
    report.valid = report.first_failure < 0;

    if (!script.targets.empty()) {
        Alphabet target;
        target.names = script.target_alphabet;
        std::vector<GroupWord> images(target.size());
        for (int g = 0; g < target.size(); ++g) {
            auto it = script.translate.find(target.names[g]);
            images[g] = it == script.translate.end() ? GroupWord{} : parse_group_word(alphabet, it->second);
        }
        std::set<GroupWord> known;
        for (const auto& [id, x] : proven) known.insert(relator_of(x));
        for (const ScriptTarget& t : script.targets) {
            Identity x = parse_identity(target, t.identity);
            Identity mapped{substitute_letters(x.lhs, images), substitute_letters(x.rhs, images)};
            (known.count(relator_of(mapped)) ? report.targets_met : report.targets_missing).push_back(t.name);
        }
    }
    return report;
}

} // namespace tessella
