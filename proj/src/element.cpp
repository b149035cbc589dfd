#include "tessella/pathalg.hpp"

#include <algorithm>

namespace tessella {

Element Element::from_word(const Word& w, const Rational& c) {
    Element e;
    e.add(w, c);
    return e;
}

void Element::add(const Word& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational Element::coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
}

Element& Element::operator+=(const Element& other) {
    for (const auto& [w, c] : other.terms_) add(w, c);
    return *this;
}

Element& Element::operator-=(const Element& other) {
    for (const auto& [w, c] : other.terms_) add(w, -c);
    return *this;
}

Element& Element::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, coeff] : terms_) coeff *= c;
    return *this;
}

Element multiply(const Quiver& q, const Element& x, const Element& y) {
    Element out;
    for (const auto& [u, cu] : x.terms())
        for (const auto& [v, cv] : y.terms())
            if (auto w = compose(q, u, v)) out.add(*w, cu * cv);
    return out;
}

Element multiply(const Quiver& q, const Word& left, const Element& x, const Word& right) {
    Element out;
    for (const auto& [w, c] : x.terms()) {
        auto lw = compose(q, left, w);
        if (!lw) continue;
        if (auto full = compose(q, *lw, right)) out.add(*full, c);
    }
    return out;
}

std::string format_element(const Quiver& q, const Element& x) {
    if (x.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : x.terms()) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        if (mag != 1) out += format_rational(mag) + (w.is_constant() ? " " : "");
        out += format_word(q, w);
    }
    return out;
}

namespace {

bool cancels(const Letter& a, const Letter& b) { return a.arrow == b.arrow && a.exp == -b.exp; }

} // namespace

Word canonical_cycle(const Quiver& q, const Word& raw) {
    Word w = normalize(q, raw);
    if (w.source != w.target) throw Error(ErrorKind::NonComposable, "potential term is not a cycle");
    std::vector<Letter> letters = w.letters;
    std::size_t lo = 0, hi = letters.size();
    while (hi - lo >= 2 && cancels(letters[lo], letters[hi - 1])) {
        ++lo;
        --hi;
    }
    if (lo == hi) {
        // The cycle collapsed to a constant path at the junction vertex.
        int v = lo == 0 ? w.target : letter_source(q, letters[lo - 1]);
        return constant_path(v);
    }
    letters = std::vector<Letter>(letters.begin() + static_cast<std::ptrdiff_t>(lo),
                                  letters.begin() + static_cast<std::ptrdiff_t>(hi));
    std::vector<Letter> best = letters;
    std::vector<Letter> rot(letters.size());
    for (std::size_t k = 1; k < letters.size(); ++k) {
        std::rotate_copy(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k), letters.end(),
                         rot.begin());
        if (rot < best) best = rot;
    }
    int v = letter_target(q, best.front());
    return Word{v, v, std::move(best)};
}

void Potential::add_cycle(const Quiver& q, const Word& w, const Rational& c) {
    if (c == 0) return;
    Word key = canonical_cycle(q, w);
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

std::string format_potential(const Quiver& q, const Potential& w) {
    Element e;
    for (const auto& [cycle, c] : w.terms()) e.add(cycle, c);
    return format_element(q, e);
}

Potential potential_from_element(const Quiver& q, const Element& x) {
    Potential w;
    for (const auto& [word, c] : x.terms()) w.add_cycle(q, word, c);
    return w;
}

Potential parse_potential(const Quiver& q, std::string_view text) {
    return potential_from_element(q, parse_element(q, text));
}

Element cyclic_derivative(const Quiver& q, const Potential& w, int arrow, int exp) {
    q.arrow(arrow);
    const Letter wanted{arrow, exp};
    const Letter opposite{arrow, -exp};
    Element out;
    for (const auto& [cycle, c] : w.terms()) {
        const auto& L = cycle.letters;
        if (std::find(L.begin(), L.end(), opposite) != L.end())
            throw Error(ErrorKind::MixedInverseViolation,
                        "potential contains both " + q.arrow(arrow).name + " and its inverse");
        for (std::size_t i = 0; i < L.size(); ++i) {
            if (L[i] != wanted) continue;
            Word rest{letter_target(q, wanted), letter_source(q, wanted), {}};
            rest.letters.insert(rest.letters.end(), L.begin() + static_cast<std::ptrdiff_t>(i) + 1, L.end());
            rest.letters.insert(rest.letters.end(), L.begin(), L.begin() + static_cast<std::ptrdiff_t>(i));
            out.add(normalize(q, rest), c);
        }
    }
    return out;
}

std::vector<Element> jacobi_relations(const Quiver& q, const Potential& w) {
    std::vector<Element> out;
    out.reserve(q.arrow_count());
    for (int a = 0; a < q.arrow_count(); ++a) out.push_back(cyclic_derivative(q, w, a));
    return out;
}

Element commutator_sum(const Quiver& q, const Potential& w) {
    Element total;
    for (int a = 0; a < q.arrow_count(); ++a) {
        Element da = cyclic_derivative(q, w, a);
        Element ea = Element::from_word(arrow_word(q, a));
        total += multiply(q, ea, da);
        total -= multiply(q, da, ea);
    }
    return total;
}

} // namespace tessella
