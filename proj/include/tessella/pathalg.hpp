#pragma once

#include "tessella/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tessella {

using Rational = boost::multiprecision::cpp_rational;

std::string format_rational(const Rational& q);
Rational parse_rational(std::string_view text);

struct Arrow {
    std::string name;
    int source = 0;
    int target = 0;
    bool localized = false;
};

// A directed multigraph.  Vertices and arrows are addressed by dense
// integer ids; names are kept for I/O only.
class Quiver {
public:
    int add_vertex(std::string name);
    int add_arrow(std::string name, int source, int target, bool localized = false);

    int vertex_count() const { return static_cast<int>(vertex_names_.size()); }
    int arrow_count() const { return static_cast<int>(arrows_.size()); }

    const std::string& vertex_name(int v) const;
    const Arrow& arrow(int a) const;
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const std::vector<std::string>& vertex_names() const { return vertex_names_; }

    std::optional<int> find_vertex(std::string_view name) const;
    std::optional<int> find_arrow(std::string_view name) const;
    int vertex_id(std::string_view name) const; // throws UnknownVertex
    int arrow_id(std::string_view name) const;  // throws UnknownArrow

    void set_localized(int a, bool value);
    bool has_localized() const;

private:
    std::vector<std::string> vertex_names_;
    std::vector<Arrow> arrows_;
};

// One signed arrow.  exp is +1 or -1.
struct Letter {
    int arrow = 0;
    int exp = 1;
    auto operator<=>(const Letter&) const = default;
};

// A path read right to left: letters[0] is applied last.  `target` is the
// end vertex of letters[0] and `source` the start vertex of letters.back().
struct Word {
    int source = 0;
    int target = 0;
    std::vector<Letter> letters;

    bool is_constant() const { return letters.empty(); }
    std::size_t length() const { return letters.size(); }
    auto operator<=>(const Word&) const = default;
};

int letter_source(const Quiver& q, Letter l);
int letter_target(const Quiver& q, Letter l);

Word constant_path(int vertex);
Word arrow_word(const Quiver& q, int arrow, int exp = 1);
// Builds a word from letters, checking composability and exponents, then
// normalizes it.  An empty letter list needs an explicit vertex.
Word make_word(const Quiver& q, const std::vector<Letter>& letters, std::optional<int> vertex = {});
Word normalize(const Quiver& q, const Word& w);
std::optional<Word> compose(const Quiver& q, const Word& left, const Word& right);
Word inverse(const Quiver& q, const Word& w);
// Vertex sitting between letters[i-1] and letters[i]; i == 0 gives target.
int vertex_at(const Quiver& q, const Word& w, std::size_t i);
Word subword(const Quiver& q, const Word& w, std::size_t begin, std::size_t end);

std::string format_word(const Quiver& q, const Word& w);
Word parse_word(const Quiver& q, std::string_view text);

class Element {
public:
    Element() = default;
    static Element from_word(const Word& w, const Rational& c = 1);

    void add(const Word& w, const Rational& c);
    const std::map<Word, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coefficient(const Word& w) const;

    Element& operator+=(const Element& other);
    Element& operator-=(const Element& other);
    Element& operator*=(const Rational& c);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(const Rational& c, Element a) { return a *= c; }
    bool operator==(const Element& other) const { return terms_ == other.terms_; }

private:
    std::map<Word, Rational> terms_;
};

Element multiply(const Quiver& q, const Element& x, const Element& y);
Element multiply(const Quiver& q, const Word& left, const Element& x, const Word& right);

std::string format_element(const Quiver& q, const Element& x);
// Compact syntax: "2rdrc - 2ardbrc + 1/2 a^-1 b".  Arrow names are matched
// greedily, longest first.  "0" denotes the zero element.
Element parse_element(const Quiver& q, std::string_view text);

// Potentials store cyclically reduced closed words in their minimal rotation.
class Potential {
public:
    void add_cycle(const Quiver& q, const Word& w, const Rational& c);
    const std::map<Word, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    bool operator==(const Potential& other) const { return terms_ == other.terms_; }

private:
    std::map<Word, Rational> terms_;
};

Word canonical_cycle(const Quiver& q, const Word& w);
std::string format_potential(const Quiver& q, const Potential& w);
Potential parse_potential(const Quiver& q, std::string_view text);
Potential potential_from_element(const Quiver& q, const Element& x);

// Rotates each occurrence of the letter (arrow, exp) to the front of its
// cycle and deletes it.  Refuses when the potential also contains the
// opposite letter.
Element cyclic_derivative(const Quiver& q, const Potential& w, int arrow, int exp = 1);
std::vector<Element> jacobi_relations(const Quiver& q, const Potential& w);

// Sum over arrows of a * dW/da - dW/da * a; zero for every potential.
Element commutator_sum(const Quiver& q, const Potential& w);

struct ReduceResult {
    bool zero = false;
    Element residual;
    int rounds = 0;
    std::size_t states = 0;
};

ReduceResult ideal_reduce(const Quiver& q, const Element& x, const std::vector<Element>& relations,
                          int step_bound, std::size_t state_cap = 200000);

struct GinzburgDga {
    Quiver doubled;           // arrows of Q, then a*, then one loop t_i per vertex
    int original_arrows = 0;
    std::vector<int> degree;  // per arrow of `doubled`
    std::vector<Element> differential;
};

GinzburgDga ginzburg_dga(const Quiver& q, const Potential& w);
Element apply_differential(const GinzburgDga& dga, const Element& x);

struct DSquaredReport {
    bool ok = true;
    std::string generator;
    Element witness;
    std::string reason;
};

DSquaredReport check_d_squared(const GinzburgDga& dga);

} // namespace tessella
