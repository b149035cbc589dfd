#include "tessella/pathalg.hpp"

namespace tessella {

GinzburgDga ginzburg_dga(const Quiver& q, const Potential& w) {
    if (q.has_localized())
        throw Error(ErrorKind::LocalizedQuiverUnsupported, "the Ginzburg dga needs an un-localized quiver");
    GinzburgDga dga;
    for (const auto& name : q.vertex_names()) dga.doubled.add_vertex(name);
    const int n = q.arrow_count();
    for (const Arrow& a : q.arrows()) dga.doubled.add_arrow(a.name, a.source, a.target);
    for (const Arrow& a : q.arrows()) dga.doubled.add_arrow(a.name + "*", a.target, a.source);
    for (int v = 0; v < q.vertex_count(); ++v) dga.doubled.add_arrow("t" + q.vertex_name(v), v, v);
    dga.original_arrows = n;

    dga.degree.assign(dga.doubled.arrow_count(), 0);
    for (int a = 0; a < n; ++a) dga.degree[n + a] = -1;
    for (int v = 0; v < q.vertex_count(); ++v) dga.degree[2 * n + v] = -2;

    // Words over Q keep their arrow ids inside the doubled quiver.
    dga.differential.assign(dga.doubled.arrow_count(), Element{});
    for (int a = 0; a < n; ++a) dga.differential[n + a] = cyclic_derivative(q, w, a);
    for (int v = 0; v < q.vertex_count(); ++v) {
        Element sum;
        for (int a = 0; a < n; ++a) {
            Element x = Element::from_word(arrow_word(dga.doubled, a));
            Element xs = Element::from_word(arrow_word(dga.doubled, n + a));
            sum += multiply(dga.doubled, x, xs);
            sum -= multiply(dga.doubled, xs, x);
        }
        Element ev = Element::from_word(constant_path(v));
        dga.differential[2 * n + v] = multiply(dga.doubled, multiply(dga.doubled, ev, sum), ev);
    }
    return dga;
}

namespace {

int word_degree_in(const GinzburgDga& dga, const Word& w) {
    int d = 0;
    for (const Letter& l : w.letters) d += dga.degree[l.arrow];
    return d;
}

} // namespace

Element apply_differential(const GinzburgDga& dga, const Element& x) {
    const Quiver& q = dga.doubled;
    Element out;
    for (const auto& [w, c] : x.terms()) {
        // Graded Leibniz rule over the written product, left factor first.
        int sign_degree = 0;
        for (std::size_t i = 0; i < w.length(); ++i) {
            const Element& dl = dga.differential[w.letters[i].arrow];
            if (!dl.is_zero()) {
                Element piece = multiply(q, subword(q, w, 0, i), dl, subword(q, w, i + 1, w.length()));
                piece *= (sign_degree % 2 == 0 ? c : Rational(-c));
                out += piece;
            }
            sign_degree += dga.degree[w.letters[i].arrow];
        }
    }
    return out;
}

DSquaredReport check_d_squared(const GinzburgDga& dga) {
    DSquaredReport report;
    for (int g = 0; g < dga.doubled.arrow_count(); ++g) {
        const Element& dg = dga.differential[g];
        for (const auto& [w, c] : dg.terms()) {
            if (word_degree_in(dga, w) != dga.degree[g] + 1) {
                report.ok = false;
                report.generator = dga.doubled.arrow(g).name;
                report.witness = Element::from_word(w, c);
                report.reason = "differential does not raise degree by one";
                return report;
            }
        }
        Element dd = apply_differential(dga, dg);
        if (!dd.is_zero()) {
            report.ok = false;
            report.generator = dga.doubled.arrow(g).name;
            report.witness = dd;
            report.reason = "d(d(" + report.generator + ")) is nonzero";
            return report;
        }
    }
    return report;
}

} // namespace tessella
