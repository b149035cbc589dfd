#include "doctest.h"
#include "support.hpp"

#include "tessella/io.hpp"
#include "tessella/presentation.hpp"

#include <deque>
#include <set>
#include <unordered_set>

using namespace tessella;

namespace {

GroupWord gw(const SurfacePresentation& p, const std::string& text) { return parse_group_word(p.alphabet, text); }

// a<->j, b<->i, c<->h, d<->g, e<->f and 1<->2
QuiverAutomorphism running_phi(const Quiver& q) {
    QuiverAutomorphism phi;
    phi.order = 2;
    phi.vertex_perm = {1, 0};
    const char* pairs[][2] = {{"a", "j"}, {"b", "i"}, {"c", "h"}, {"d", "g"}, {"e", "f"}};
    phi.arrow_perm.assign(q.arrow_count(), -1);
    for (auto& p : pairs) {
        phi.arrow_perm[q.arrow_id(p[0])] = q.arrow_id(p[1]);
        phi.arrow_perm[q.arrow_id(p[1])] = q.arrow_id(p[0]);
    }
    return phi;
}

SemidirectQuiver running_ctx() {
    Quiver q = fixture::running_quiver();
    OrbitChoice choice;
    for (char c : std::string("abcde")) choice.generators.push_back(q.arrow_id(std::string(1, c)));
    choice.bases = {q.vertex_id("2")};
    return build_orbit_quiver(q, running_phi(q), choice);
}

Potential running_w(const SemidirectQuiver& ctx) { return parse_potential(ctx.q, fixture::running_potential_text()); }

PsiSetup running_certificate(const SemidirectQuiver& ctx) {
    return certificate_setup(ctx, running_w(ctx), std::vector<int>{ctx.q.arrow_id("e")}, ctx.q.vertex_id("1"));
}

// Words in Q' (letters and inverses of localized arrows) up to a length.
std::vector<Word> localized_paths(const Quiver& q, std::size_t max_length) {
    std::vector<Word> out, layer;
    for (int v = 0; v < q.vertex_count(); ++v) layer.push_back(constant_path(v));
    for (std::size_t len = 0; len <= max_length; ++len) {
        out.insert(out.end(), layer.begin(), layer.end());
        if (len == max_length) break;
        std::vector<Word> next;
        for (const Word& w : layer)
            for (int a = 0; a < q.arrow_count(); ++a)
                for (int e : {1, -1}) {
                    if (e < 0 && !q.arrow(a).localized) continue;
                    if (!w.letters.empty() && w.letters.front() == Letter{a, -e}) continue;
                    if (auto c = compose(q, arrow_word(q, a, e), w)) next.push_back(*c);
                }
        layer = std::move(next);
    }
    return out;
}

// Every word of length <= cap that can be reached from the empty word by
// inserting or deleting x x^-1 and rotations of R^{+-1} without ever
// exceeding the cap.
std::set<GroupWord> trivial_words_up_to(const SurfacePresentation& p, std::size_t cap) {
    std::vector<GroupWord> blocks;
    const int gens = p.alphabet.size();
    for (int g = 1; g <= gens; ++g) {
        blocks.push_back({g, -g});
        blocks.push_back({-g, g});
    }
    for (const GroupWord& base : {p.relator, inverse(p.relator)})
        for (std::size_t k = 0; k < base.size(); ++k) {
            GroupWord rot(base.begin() + k, base.end());
            rot.insert(rot.end(), base.begin(), base.begin() + k);
            blocks.push_back(rot);
        }
    std::set<GroupWord> seen{GroupWord{}};
    std::deque<GroupWord> queue{GroupWord{}};
    while (!queue.empty()) {
        GroupWord w = queue.front();
        queue.pop_front();
        auto visit = [&](GroupWord x) {
            if (seen.insert(x).second) queue.push_back(std::move(x));
        };
        for (const GroupWord& b : blocks) {
            if (w.size() + b.size() <= cap)
                for (std::size_t i = 0; i <= w.size(); ++i) {
                    GroupWord x(w.begin(), w.begin() + i);
                    x.insert(x.end(), b.begin(), b.end());
                    x.insert(x.end(), w.begin() + i, w.end());
                    visit(std::move(x));
                }
            for (std::size_t i = 0; i + b.size() <= w.size(); ++i)
                if (std::equal(b.begin(), b.end(), w.begin() + i)) {
                    GroupWord x(w.begin(), w.begin() + i);
                    x.insert(x.end(), w.begin() + i + b.size(), w.end());
                    visit(std::move(x));
                }
        }
    }
    return seen;
}

GroupWord random_word(std::mt19937& rng, int gens, int max_len) {
    GroupWord w;
    int len = std::uniform_int_distribution<int>(0, max_len)(rng);
    for (int k = 0; k < len; ++k) {
        int g = std::uniform_int_distribution<int>(1, gens)(rng);
        w.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? g : -g);
    }
    return w;
}

DerivationScript orbit_script() { return derivation_script_from_json(read_json_file(fixture::data_path("orbit_script.json"))); }

} // namespace

TEST_CASE("free reduction") {
    SurfacePresentation p = SurfacePresentation::standard(2);
    CHECK(free_reduce(gw(p, "x1 x1^-1 y1")) == gw(p, "y1"));
    CHECK(free_reduce(GroupWord{}).empty());
    CHECK(free_reduce(p.relator) == p.relator);
    CHECK(free_reduce(free_reduce(gw(p, "x1 y1 y1^-1 x2 x2^-1 x1^-1 y2"))) == gw(p, "y2"));
    CHECK(format_group_word(p.alphabet, p.relator) == "x1 y1 x1^-1 y1^-1 x2 y2 x2^-1 y2^-1");
}

TEST_CASE("Dehn reduction examples") {
    SurfacePresentation p = SurfacePresentation::standard(2);
    CHECK(p.relator.size() == 8);
    CHECK(dehn_reduce(p.relator, p).empty());
    CHECK(dehn_reduce(inverse(p.relator), p).empty());
    CHECK(dehn_reduce(gw(p, "x1y1x1^-1y1^-1x2y2x2^-1"), p) == gw(p, "y2"));
    CHECK_FALSE(dehn_trivial(gw(p, "x1y1x1^-1y1^-1"), p));
    CHECK_THROWS_AS(SurfacePresentation::standard(1), Error);
}

TEST_CASE("Dehn reduction kills random products of relator conjugates") {
    std::mt19937 rng(2024);
    for (int genus : {2, 3}) {
        SurfacePresentation p = SurfacePresentation::standard(genus);
        for (int trial = 0; trial < 200; ++trial) {
            GroupWord w;
            int k = std::uniform_int_distribution<int>(1, 4)(rng);
            for (int i = 0; i < k; ++i) {
                GroupWord u = random_word(rng, p.alphabet.size(), 8);
                GroupWord r = std::uniform_int_distribution<int>(0, 1)(rng) ? p.relator : inverse(p.relator);
                w = concat(w, concat(concat(u, r), inverse(u)));
            }
            CHECK(dehn_reduce(w, p).empty());
        }
    }
}

TEST_CASE("Dehn reduction agrees with a breadth-first oracle on short words") {
    SurfacePresentation p = SurfacePresentation::standard(2);
    std::set<GroupWord> trivial = trivial_words_up_to(p, 8);
    for (const GroupWord& w : trivial) CHECK(dehn_trivial(w, p));
    // all words of length <= 6 over the 8 signed letters
    std::size_t checked = 0;
    GroupWord w;
    std::function<void()> walk = [&]() {
        GroupWord red = dehn_reduce(w, p);
        bool ok = (red.empty() == (trivial.count(w) > 0)) && red.size() <= w.size();
        if (!ok) FAIL_CHECK("disagreement on " << format_group_word(p.alphabet, w));
        ++checked;
        if (w.size() == 6) return;
        for (int g = 1; g <= 4; ++g)
            for (int s : {g, -g}) {
                w.push_back(s);
                walk();
                w.pop_back();
            }
    };
    walk();
    CHECK(checked == 299593);
}

TEST_CASE("phi action on the genus-2 surface") {
    SurfacePresentation p = SurfacePresentation::standard(2);
    PhiAction swap = phi_action_from_map(p, {{"x1", "x2"}, {"x2", "x1"}, {"y1", "y2"}, {"y2", "y1"}}, 2);
    CHECK(validate_phi_action(p, swap).empty());
    PhiAction bad = phi_action_from_map(p, {{"x1", "x2"}, {"x2", "x1"}}, 2);
    CHECK_FALSE(validate_phi_action(p, bad).empty());
    PhiAction wrong_order = phi_action_from_map(p, {{"x1", "x2"}, {"x2", "x1"}, {"y1", "y2"}, {"y2", "y1"}}, 3);
    CHECK_FALSE(validate_phi_action(p, wrong_order).empty());
    CHECK_THROWS_AS(phi_action_from_map(p, {{"z", "x1"}}, 2), Error);
}

TEST_CASE("semidirect multiplication") {
    SurfacePresentation p = SurfacePresentation::standard(2);
    PhiAction swap = phi_action_from_map(p, {{"x1", "x2"}, {"x2", "x1"}, {"y1", "y2"}, {"y2", "y1"}}, 2);
    GroupModel m = surface_model(p, swap);

    SemidirectElement r{{}, -1};
    CHECK(multiply(m, r, r) == SemidirectElement{{}, -2});

    SemidirectElement x1_up{gw(p, "x1"), 1}, x1{gw(p, "x1"), 0};
    CHECK(multiply(m, x1_up, x1) == SemidirectElement{gw(p, "x1x2"), 1});

    std::mt19937 rng(7);
    SemidirectElement central{{}, 2};
    for (int trial = 0; trial < 50; ++trial) {
        SemidirectElement g{random_word(rng, 4, 8), 0};
        CHECK(same_element(m, multiply(m, g, central), multiply(m, central, g)));
        SemidirectElement h{random_word(rng, 4, 6), std::uniform_int_distribution<int>(-3, 3)(rng)};
        CHECK(same_element(m, multiply(m, h, invert(m, h)), SemidirectElement{}));
        CHECK(same_element(m, multiply(m, multiply(m, g, h), central), multiply(m, g, multiply(m, h, central))));
    }
    CHECK(format_semidirect(m, SemidirectElement{gw(p, "x1y2^-1"), -1}) == "([x1 y2^-1], -1)");
}

TEST_CASE("certificates for face-boundary products") {
    SemidirectQuiver ctx = running_ctx();
    Quiver& q = ctx.q;
    std::vector<GroupWord> faces;
    Potential w = running_w(ctx);
    for (const auto& [cycle, c] : w.terms()) {
        GroupWord g;
        for (const Letter& l : cycle.letters) g.push_back(l.exp * (l.arrow + 1));
        faces.push_back(g);
    }
    auto letter = [&](const char* name) { return q.arrow_id(name) + 1; };
    CHECK(certify_trivial({}, faces, 2) == 0);
    CHECK(certify_trivial({letter("f"), letter("e")}, faces, 2) == 1);
    CHECK(certify_trivial({letter("c"), letter("g")}, faces, 2) == 1);
    // (fe)(gc) conjugated by a
    GroupWord two{letter("a"), letter("f"), letter("e"), letter("g"), letter("c"), -letter("a")};
    CHECK(certify_trivial(two, faces, 2) == 2);
    CHECK_FALSE(certify_trivial({letter("a")}, faces, 2).has_value());
}

TEST_CASE("psi images on the running example") {
    SemidirectQuiver ctx = running_ctx();
    PsiSetup s = running_certificate(ctx);
    const Quiver& qp = ctx.qprime;
    auto image = [&](const char* name) { return psi_eval(ctx, s, parse_word(qp, name)); };
    auto q_letters = [&](const std::string& text) { return parse_group_word(s.model.alphabet, text); };

    MatrixUnitElement a = image("a");
    CHECK(a.value == SemidirectElement{q_letters("a"), 0});
    CHECK(a.row == ctx.q.vertex_id("1"));
    MatrixUnitElement c = image("c");
    CHECK(c.value == SemidirectElement{q_letters("e^-1c"), 0});
    CHECK(c.row == ctx.q.vertex_id("2"));
    CHECK(c.col == ctx.q.vertex_id("1"));
    MatrixUnitElement r = image("r");
    CHECK(r.value.power == -1);
    CHECK(same_element(s.model, r.value, SemidirectElement{{}, -1}));
    CHECK(same_element(s.model, image("re").value, SemidirectElement{{}, -1}));

    MatrixUnitElement id = psi_eval(ctx, s, constant_path(1));
    CHECK(id.row == 1);
    CHECK(id.col == 1);
    CHECK(id.value == SemidirectElement{});
}

TEST_CASE("psi integer part is minus the degree, and psi is multiplicative") {
    SemidirectQuiver ctx = running_ctx();
    PsiSetup s = running_certificate(ctx);
    std::vector<Word> paths = localized_paths(ctx.qprime, 6);
    CHECK(paths.size() > 1000);
    for (const Word& w : paths) {
        MatrixUnitElement m = psi_eval(ctx, s, w);
        if (m.value.power != -word_degree(ctx, w)) FAIL_CHECK(format_word(ctx.qprime, w));
        if (m.row != w.target || m.col != w.source) FAIL_CHECK(format_word(ctx.qprime, w));
    }
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, paths.size() - 1);
    int pairs = 0;
    while (pairs < 300) {
        const Word& w1 = paths[pick(rng)];
        const Word& w2 = paths[pick(rng)];
        auto w = compose(ctx.qprime, w1, w2);
        if (!w) continue;
        ++pairs;
        MatrixUnitElement lhs = psi_eval(ctx, s, *w);
        SemidirectElement rhs = multiply(s.model, psi_eval(ctx, s, w1).value, psi_eval(ctx, s, w2).value);
        CHECK(free_reduce(lhs.value.word) == free_reduce(rhs.word));
        CHECK(lhs.value.power == rhs.power);
    }
}

TEST_CASE("psi respects the derivative relations") {
    SemidirectQuiver ctx = running_ctx();
    Potential wp = parse_potential(ctx.qprime, fixture::transported_potential_text());

    SUBCASE("certificate mode") {
        PsiReport rep = verify_psi_relations(ctx, wp, running_certificate(ctx));
        CHECK(rep.pass);
        CHECK(rep.mode == "certificate");
        CHECK(rep.arrows.size() == 5);
        for (const auto& a : rep.arrows) CHECK_MESSAGE(a.pass, a.arrow << ": " << a.detail);
        for (const auto& a : rep.arrows) CHECK((a.conjugates >= 1 && a.conjugates <= 8));
    }
    SUBCASE("dehn mode") {
        DehnConfig cfg = dehn_config_from_json(read_json_file(fixture::data_path("orbit_surface.json")));
        CHECK(validate_phi_action(cfg.pres, cfg.phi).empty());
        PsiReport rep = verify_psi_relations(ctx, wp, dehn_setup(ctx, cfg));
        CHECK(rep.pass);
        for (const auto& a : rep.arrows) CHECK_MESSAGE(a.pass, a.arrow << ": " << a.detail);
        cfg.arrow_classes.erase("r");
        CHECK_THROWS_AS(dehn_setup(ctx, cfg), Error);
    }
    SUBCASE("perturbed potential") {
        Potential broken = parse_potential(ctx.qprime, std::string(fixture::transported_potential_text()) + " - ab");
        PsiReport rep = verify_psi_relations(ctx, broken, running_certificate(ctx));
        CHECK_FALSE(rep.pass);
        bool witnessed = false;
        for (const auto& a : rep.arrows)
            if (!a.pass && a.detail.rfind("degree mismatch", 0) == 0) witnessed = true;
        CHECK(witnessed);
    }
    SUBCASE("missing phi_star") {
        Json cfg = read_json_file(fixture::data_path("orbit_surface.json"));
        cfg.erase("phi_star");
        try {
            dehn_config_from_json(cfg);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::MissingPhiAction);
        }
    }
}

TEST_CASE("psi on the three-edge torus with trivial action") {
    BraneTiling t = tiling_from_json(read_json_file(fixture::data_path("torus3_tiling.json")));
    DualQuiver d = dual_quiver(t);
    QuiverAutomorphism id = identity_automorphism(d.quiver);
    SemidirectQuiver ctx = build_orbit_quiver(d.quiver, id, default_choice(d.quiver, id));
    Potential wp = transport_potential(ctx, d.potential).potential;
    PsiReport rep = verify_psi_relations(ctx, wp, certificate_setup(ctx, d.potential));
    CHECK(rep.pass);
    CHECK(rep.arrows.size() == static_cast<std::size_t>(d.quiver.arrow_count()));
}

TEST_CASE("derivation script for the orbit quiver") {
    SemidirectQuiver ctx = running_ctx();
    Potential wp = parse_potential(ctx.qprime, fixture::transported_potential_text());

    Alphabet letters;
    auto rel = script_relations(ctx.qprime, wp, {"e"}, letters);
    CHECK(letters.names == std::vector<std::string>{"a", "b", "c", "d", "r"});
    CHECK(rel.size() == 5);
    CHECK(format_group_word(letters, rel.at("a").lhs) == "brabr");
    CHECK(format_group_word(letters, rel.at("a").rhs) == "rdbrc");
    CHECK(format_group_word(letters, rel.at("e").lhs) == "abrabr");
    CHECK(format_group_word(letters, rel.at("e").rhs) == "rr");
    CHECK(rel.count("r") == 0);

    SUBCASE("full script") {
        ScriptReport rep = check_derivation_script(ctx.qprime, wp, orbit_script());
        for (const auto& st : rep.steps) CHECK_MESSAGE(st.ok, st.id << ": " << st.message);
        CHECK(rep.valid);
        CHECK(rep.targets_missing.empty());
        CHECK(rep.targets_met.size() == 3);
        CHECK(rep.established.size() == 5);
    }
    SUBCASE("unmade substitution") {
        DerivationScript s = orbit_script();
        s.steps[1].claim = "rdrc = rrc";
        ScriptReport rep = check_derivation_script(ctx.qprime, wp, s);
        CHECK_FALSE(rep.valid);
        CHECK(rep.first_failure == 1);
        CHECK(rep.steps.size() == 2);
        CHECK(rep.targets_missing.size() == 3);
    }
    SUBCASE("forward reference") {
        DerivationScript s = orbit_script();
        s.steps[0].using_ref = "s3";
        s.steps[0].kind = "rewrite";
        CHECK(check_derivation_script(ctx.qprime, wp, s).first_failure == 0);
    }
    SUBCASE("empty script") {
        ScriptReport rep = check_derivation_script(ctx.qprime, wp, DerivationScript{});
        CHECK(rep.valid);
        CHECK(rep.established.empty());
        CHECK(rep.steps.empty());
    }
}
