#include "tessella/pathalg.hpp"

#include <algorithm>
#include <cctype>

namespace tessella {

std::string format_rational(const Rational& q) {
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int num(s.substr(0, slash));
        boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw Error(ErrorKind::InvalidInput, "bad rational '" + s + "'");
    }
}

int Quiver::add_vertex(std::string name) {
    if (find_vertex(name)) throw Error(ErrorKind::InvalidInput, "duplicate vertex " + name);
    vertex_names_.push_back(std::move(name));
    return vertex_count() - 1;
}

int Quiver::add_arrow(std::string name, int source, int target, bool localized) {
    if (source < 0 || source >= vertex_count() || target < 0 || target >= vertex_count())
        throw Error(ErrorKind::UnknownVertex, "arrow " + name + " references a missing vertex");
    if (find_arrow(name)) throw Error(ErrorKind::InvalidInput, "duplicate arrow " + name);
    arrows_.push_back(Arrow{std::move(name), source, target, localized});
    return arrow_count() - 1;
}

const std::string& Quiver::vertex_name(int v) const {
    if (v < 0 || v >= vertex_count()) throw Error(ErrorKind::UnknownVertex, std::to_string(v));
    return vertex_names_[v];
}

const Arrow& Quiver::arrow(int a) const {
    if (a < 0 || a >= arrow_count()) throw Error(ErrorKind::UnknownArrow, std::to_string(a));
    return arrows_[a];
}

std::optional<int> Quiver::find_vertex(std::string_view name) const {
    for (int v = 0; v < vertex_count(); ++v)
        if (vertex_names_[v] == name) return v;
    return std::nullopt;
}

std::optional<int> Quiver::find_arrow(std::string_view name) const {
    for (int a = 0; a < arrow_count(); ++a)
        if (arrows_[a].name == name) return a;
    return std::nullopt;
}

int Quiver::vertex_id(std::string_view name) const {
    if (auto v = find_vertex(name)) return *v;
    throw Error(ErrorKind::UnknownVertex, std::string(name));
}

int Quiver::arrow_id(std::string_view name) const {
    if (auto a = find_arrow(name)) return *a;
    throw Error(ErrorKind::UnknownArrow, std::string(name));
}

void Quiver::set_localized(int a, bool value) {
    arrow(a);
    arrows_[a].localized = value;
}

bool Quiver::has_localized() const {
    return std::any_of(arrows_.begin(), arrows_.end(), [](const Arrow& a) { return a.localized; });
}

int letter_source(const Quiver& q, Letter l) {
    const Arrow& a = q.arrow(l.arrow);
    return l.exp > 0 ? a.source : a.target;
}

int letter_target(const Quiver& q, Letter l) {
    const Arrow& a = q.arrow(l.arrow);
    return l.exp > 0 ? a.target : a.source;
}

Word constant_path(int vertex) { return Word{vertex, vertex, {}}; }

Word arrow_word(const Quiver& q, int arrow, int exp) { return make_word(q, {Letter{arrow, exp}}); }

Word make_word(const Quiver& q, const std::vector<Letter>& letters, std::optional<int> vertex) {
    if (letters.empty()) {
        if (!vertex) throw Error(ErrorKind::MalformedWord, "empty word without a vertex");
        q.vertex_name(*vertex);
        return constant_path(*vertex);
    }
    for (std::size_t i = 0; i < letters.size(); ++i) {
        const Letter& l = letters[i];
        const Arrow& a = q.arrow(l.arrow);
        if (l.exp != 1 && l.exp != -1) throw Error(ErrorKind::MalformedWord, "exponent must be +1 or -1");
        if (l.exp < 0 && !a.localized)
            throw Error(ErrorKind::InverseOfNonLocalized, a.name + " is not localized");
        if (i + 1 < letters.size() && letter_source(q, l) != letter_target(q, letters[i + 1]))
            throw Error(ErrorKind::NonComposable,
                        q.arrow(letters[i + 1].arrow).name + " then " + a.name + " do not compose");
    }
    Word w{letter_source(q, letters.back()), letter_target(q, letters.front()), letters};
    if (vertex && *vertex != w.source) throw Error(ErrorKind::NonComposable, "vertex mismatch");
    return normalize(q, w);
}

Word normalize(const Quiver& q, const Word& w) {
    std::vector<Letter> out;
    out.reserve(w.letters.size());
    for (const Letter& l : w.letters) {
        if (l.exp < 0 && !q.arrow(l.arrow).localized)
            throw Error(ErrorKind::InverseOfNonLocalized, q.arrow(l.arrow).name + " is not localized");
        if (!out.empty() && out.back().arrow == l.arrow && out.back().exp == -l.exp)
            out.pop_back();
        else
            out.push_back(l);
    }
    return Word{w.source, w.target, std::move(out)};
}

std::optional<Word> compose(const Quiver& q, const Word& left, const Word& right) {
    if (right.target != left.source) return std::nullopt;
    Word w{right.source, left.target, left.letters};
    w.letters.insert(w.letters.end(), right.letters.begin(), right.letters.end());
    return normalize(q, w);
}

Word inverse(const Quiver& q, const Word& w) {
    Word out{w.target, w.source, {}};
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if (!q.arrow(it->arrow).localized)
            throw Error(ErrorKind::InverseOfNonLocalized, q.arrow(it->arrow).name + " is not localized");
        out.letters.push_back(Letter{it->arrow, -it->exp});
    }
    return out;
}

int vertex_at(const Quiver& q, const Word& w, std::size_t i) {
    if (i == 0) return w.target;
    return letter_source(q, w.letters[i - 1]);
}

Word subword(const Quiver& q, const Word& w, std::size_t begin, std::size_t end) {
    Word out{vertex_at(q, w, end), vertex_at(q, w, begin), {}};
    out.letters.assign(w.letters.begin() + static_cast<std::ptrdiff_t>(begin),
                       w.letters.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

namespace {

bool single_char_names(const Quiver& q) {
    return std::all_of(q.arrows().begin(), q.arrows().end(),
                       [](const Arrow& a) { return a.name.size() == 1; });
}

} // namespace

std::string format_word(const Quiver& q, const Word& w) {
    if (w.letters.empty()) return "id(" + q.vertex_name(w.source) + ")";
    const bool compact = single_char_names(q);
    std::string out;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i > 0 && !compact) out += ' ';
        out += q.arrow(w.letters[i].arrow).name;
        if (w.letters[i].exp < 0) out += "^-1";
    }
    return out;
}

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool done() {
        skip_space();
        return pos >= text.size();
    }
    bool eat(std::string_view token) {
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }
};

// Reads one word: arrow names with optional inverse markers, or id(v).
// Stops at a top-level sign or the end of input.
Word read_word(const Quiver& q, Cursor& c) {
    c.skip_space();
    if (c.eat("id(")) {
        auto close = c.text.find(')', c.pos);
        if (close == std::string_view::npos) throw Error(ErrorKind::InvalidInput, "unterminated id(");
        int v = q.vertex_id(c.text.substr(c.pos, close - c.pos));
        c.pos = close + 1;
        return constant_path(v);
    }
    std::vector<Letter> letters;
    while (true) {
        c.skip_space();
        if (c.pos >= c.text.size()) break;
        char ch = c.text[c.pos];
        if (ch == '+' || ch == '-' || c.text.substr(c.pos, 3) == "−") break;
        int best = -1;
        std::size_t best_len = 0;
        for (int a = 0; a < q.arrow_count(); ++a) {
            const std::string& name = q.arrow(a).name;
            if (name.size() > best_len && c.text.substr(c.pos, name.size()) == name) {
                best = a;
                best_len = name.size();
            }
        }
        if (best < 0)
            throw Error(ErrorKind::UnknownArrow, "cannot read an arrow at '" + std::string(c.text.substr(c.pos)) + "'");
        c.pos += best_len;
        int exp = 1;
        if (c.eat("^-1") || c.eat("⁻¹")) exp = -1;
        letters.push_back(Letter{best, exp});
    }
    if (letters.empty()) throw Error(ErrorKind::InvalidInput, "empty word");
    return make_word(q, letters);
}

} // namespace

Word parse_word(const Quiver& q, std::string_view text) {
    Cursor c{text};
    Word w = read_word(q, c);
    if (!c.done()) throw Error(ErrorKind::InvalidInput, "trailing text in word");
    return w;
}

Element parse_element(const Quiver& q, std::string_view text) {
    Cursor c{text};
    Element out;
    if (c.done()) return out;
    if (text.find_first_not_of(" 0") == std::string_view::npos) return out;
    bool first = true;
    while (!c.done()) {
        Rational sign = 1;
        if (c.eat("+")) {
        } else if (c.eat("-") || c.eat("−")) {
            sign = -1;
        } else if (!first) {
            throw Error(ErrorKind::InvalidInput, "expected + or - in element");
        }
        first = false;
        c.skip_space();
        std::size_t start = c.pos;
        while (c.pos < c.text.size() &&
               (std::isdigit(static_cast<unsigned char>(c.text[c.pos])) || c.text[c.pos] == '/'))
            ++c.pos;
        Rational coeff = 1;
        if (c.pos > start) coeff = parse_rational(c.text.substr(start, c.pos - start));
        out.add(read_word(q, c), sign * coeff);
    }
    return out;
}

} // namespace tessella
