#include "tessella/pathalg.hpp"

#include <deque>
#include <set>

namespace tessella {

namespace {

struct Rule {
    Word lead;
    Element rhs;
};

bool leading_less(const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.letters < b.letters;
}

std::vector<Rule> make_rules(const std::vector<Element>& relations) {
    std::vector<Rule> rules;
    for (const Element& rel : relations) {
        if (rel.is_zero()) continue;
        const Word* lead = nullptr;
        for (const auto& [w, c] : rel.terms())
            if (!lead || leading_less(*lead, w)) lead = &w;
        Rational c = rel.coefficient(*lead);
        Element rhs = rel;
        rhs.add(*lead, -c);
        rhs *= Rational(-1) / c;
        rules.push_back(Rule{*lead, std::move(rhs)});
    }
    return rules;
}

bool all_localized(const Quiver& q, const std::vector<Letter>& letters, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
        if (!q.arrow(letters[i].arrow).localized) return false;
    return true;
}

// Every single rewrite of one term of x by one rule.  Besides plain
// subword matches, a word that ends (or begins) with part of a leading
// word is matched when the missing part is invertible: w = A l S^-1.
std::vector<Element> successors(const Quiver& q, const Element& x, const std::vector<Rule>& rules) {
    std::vector<Element> out;
    for (const auto& [w, k] : x.terms()) {
        const auto& W = w.letters;
        const std::size_t m = W.size();
        for (const Rule& rule : rules) {
            const auto& L = rule.lead.letters;
            const std::size_t l = L.size();
            auto emit = [&](const Element& replacement) {
                Element next = x;
                next.add(w, -k);
                Element scaled = replacement;
                scaled *= k;
                next += scaled;
                out.push_back(std::move(next));
            };
            for (std::size_t p = 0; p + l <= m; ++p) {
                if (!std::equal(L.begin(), L.end(), W.begin() + static_cast<std::ptrdiff_t>(p))) continue;
                emit(multiply(q, subword(q, w, 0, p), rule.rhs, subword(q, w, p + l, m)));
            }
            for (std::size_t j = 1; j < l && j <= m; ++j) {
                // w ends with L[0, j)
                if (std::equal(L.begin(), L.begin() + static_cast<std::ptrdiff_t>(j),
                               W.end() - static_cast<std::ptrdiff_t>(j)) &&
                    all_localized(q, L, j, l)) {
                    Word tail = inverse(q, subword(q, rule.lead, j, l));
                    emit(multiply(q, subword(q, w, 0, m - j), rule.rhs, tail));
                }
                // w begins with L[l - j, l)
                if (std::equal(L.end() - static_cast<std::ptrdiff_t>(j), L.end(), W.begin()) &&
                    all_localized(q, L, 0, l - j)) {
                    Word head = inverse(q, subword(q, rule.lead, 0, l - j));
                    emit(multiply(q, head, rule.rhs, subword(q, w, j, m)));
                }
            }
        }
    }
    return out;
}

std::size_t weight(const Element& x) {
    std::size_t total = 0;
    for (const auto& [w, c] : x.terms()) total += w.length() + 1;
    return total;
}

} // namespace

ReduceResult ideal_reduce(const Quiver& q, const Element& x, const std::vector<Element>& relations,
                          int step_bound, std::size_t state_cap) {
    ReduceResult result;
    result.residual = x;
    if (x.is_zero()) {
        result.zero = true;
        return result;
    }
    const std::vector<Rule> rules = make_rules(relations);
    std::set<std::string> seen{format_element(q, x)};
    std::deque<std::pair<Element, int>> queue{{x, 0}};
    while (!queue.empty()) {
        auto [cur, depth] = std::move(queue.front());
        queue.pop_front();
        if (depth >= step_bound) continue;
        for (Element& next : successors(q, cur, rules)) {
            if (next.is_zero()) {
                result.zero = true;
                result.residual = Element{};
                result.rounds = depth + 1;
                result.states = seen.size();
                return result;
            }
            if (!seen.insert(format_element(q, next)).second) continue;
            if (weight(next) < weight(result.residual)) result.residual = next;
            result.rounds = std::max(result.rounds, depth + 1);
            if (seen.size() >= state_cap) {
                result.states = seen.size();
                return result;
            }
            queue.emplace_back(std::move(next), depth + 1);
        }
    }
    result.states = seen.size();
    return result;
}

} // namespace tessella
