#include "tessella/presentation.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace tessella {

namespace {

GroupWord as_group_word(const Word& w) {
    GroupWord out;
    for (const Letter& l : w.letters) out.push_back(l.exp > 0 ? l.arrow + 1 : -(l.arrow + 1));
    return out;
}

// Applies a permutation of arrows letterwise.
GroupWord permute_letters(const GroupWord& w, const std::vector<int>& perm) {
    GroupWord out;
    for (int x : w) out.push_back(x > 0 ? perm[x - 1] + 1 : -(perm[-x - 1] + 1));
    return out;
}

// Paths from the basepoint to every vertex through tree arrows (either direction).
std::vector<GroupWord> tree_paths(const Quiver& q, const std::vector<int>& tree, int bp) {
    std::vector<std::optional<GroupWord>> path(q.vertex_count());
    path[bp] = GroupWord{};
    std::deque<int> queue{bp};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int a : tree) {
            const Arrow& arr = q.arrow(a);
            if (arr.source == v && !path[arr.target]) {
                GroupWord p{a + 1};
                p.insert(p.end(), path[v]->begin(), path[v]->end());
                path[arr.target] = p;
                queue.push_back(arr.target);
            } else if (arr.target == v && !path[arr.source]) {
                GroupWord p{-(a + 1)};
                p.insert(p.end(), path[v]->begin(), path[v]->end());
                path[arr.source] = p;
                queue.push_back(arr.source);
            }
        }
    }
    std::vector<GroupWord> out;
    for (int v = 0; v < q.vertex_count(); ++v) {
        if (!path[v]) throw Error(ErrorKind::NotInTreeClosure, "tree does not reach vertex " + q.vertex_name(v));
        out.push_back(*path[v]);
    }
    return out;
}

std::vector<int> default_tree(const SemidirectQuiver& ctx) {
    const Quiver& q = ctx.q;
    std::vector<int> comp(q.vertex_count());
    for (int v = 0; v < q.vertex_count(); ++v) comp[v] = v;
    std::function<int(int)> find = [&](int v) { return comp[v] == v ? v : comp[v] = find(comp[v]); };
    std::vector<int> tree;
    for (int a = 0; a < q.arrow_count(); ++a) {
        if (word_degree(ctx, xi_arrow(ctx, a)) != 0) continue;
        int s = find(q.arrow(a).source), t = find(q.arrow(a).target);
        if (s == t) continue;
        comp[s] = t;
        tree.push_back(a);
    }
    return tree;
}

int default_basepoint(const SemidirectQuiver& ctx) {
    for (int v = 0; v < ctx.qprime.vertex_count(); ++v)
        for (int a = 0; a < ctx.qprime.arrow_count(); ++a)
            if (ctx.is_iso(a) && (ctx.qprime.arrow(a).source == v || ctx.qprime.arrow(a).target == v)) return v;
    return 0;
}

} // namespace

PsiSetup certificate_setup(const SemidirectQuiver& ctx, const Potential& w, std::optional<std::vector<int>> tree,
                           std::optional<int> basepoint, int max_conjugates) {
    const Quiver& q = ctx.q;
    PsiSetup s;
    s.certificate = true;
    s.max_conjugates = max_conjugates;
    s.basepoint = basepoint ? *basepoint : default_basepoint(ctx);
    s.tree = tree ? *tree : default_tree(ctx);
    for (int a : s.tree)
        if (word_degree(ctx, xi_arrow(ctx, a)) != 0)
            throw Error(ErrorKind::BadChoice, "tree arrow " + q.arrow(a).name + " has nonzero degree");
    if (static_cast<int>(s.tree.size()) != q.vertex_count() - 1)
        throw Error(ErrorKind::NotInTreeClosure, "tree must have one arrow fewer than Q has vertices");
    s.tree_path = tree_paths(q, s.tree, s.basepoint);
    for (const auto& [cycle, c] : w.terms()) s.relators.push_back(as_group_word(cycle));

    std::vector<int> perm = ctx.phi.arrow_perm, perm_inv(perm.size());
    for (std::size_t a = 0; a < perm.size(); ++a) perm_inv[perm[a]] = static_cast<int>(a);
    const GroupWord gamma = s.tree_path[ctx.phi.vertex_perm[s.basepoint]];

    GroupModel& m = s.model;
    for (const Arrow& a : q.arrows()) m.alphabet.names.push_back(a.name);
    m.reduce = [](const GroupWord& x) { return free_reduce(x); };
    std::vector<GroupWord> relators = s.relators;
    m.trivial = [relators, max_conjugates](const GroupWord& x) {
        return certify_trivial(x, relators, max_conjugates).has_value();
    };
    m.phi = [gamma, perm](const GroupWord& x) { return concat(concat(inverse(gamma), permute_letters(x, perm)), gamma); };
    m.phi_inverse = [gamma, perm_inv](const GroupWord& x) {
        return permute_letters(concat(concat(gamma, x), inverse(gamma)), perm_inv);
    };

    s.image.resize(ctx.qprime.arrow_count());
    for (int p = 0; p < ctx.qprime.arrow_count(); ++p) {
        const Arrow& arr = ctx.qprime.arrow(p);
        if (!ctx.is_iso(p)) {
            int a = ctx.q_of_prime[p];
            GroupWord loop = concat(concat(inverse(s.tree_path[arr.target]), GroupWord{a + 1}), s.tree_path[arr.source]);
            s.image[p] = SemidirectElement{loop, 0};
        } else {
            // phi^-1(gamma) phi^-1(t_target)^-1 t_source
            GroupWord loop = concat(concat(permute_letters(gamma, perm_inv),
                                           inverse(permute_letters(s.tree_path[arr.target], perm_inv))),
                                    s.tree_path[arr.source]);
            s.image[p] = SemidirectElement{loop, -1};
        }
    }
    return s;
}

PsiSetup dehn_setup(const SemidirectQuiver& ctx, const DehnConfig& config) {
    PsiSetup s;
    s.certificate = false;
    s.model = surface_model(config.pres, config.phi);
    s.basepoint = config.basepoint.empty() ? default_basepoint(ctx) : ctx.q.vertex_id(config.basepoint);
    for (const auto& name : config.tree) s.tree.push_back(ctx.q.arrow_id(name));
    s.image.resize(ctx.qprime.arrow_count());
    for (int p = 0; p < ctx.qprime.arrow_count(); ++p) {
        const std::string& name = ctx.qprime.arrow(p).name;
        auto it = config.arrow_classes.find(name);
        if (it == config.arrow_classes.end())
            throw Error(ErrorKind::MissingPhiAction, "no surface class given for arrow " + name);
        s.image[p] = SemidirectElement{parse_group_word(config.pres.alphabet, it->second), ctx.is_iso(p) ? -1 : 0};
    }
    return s;
}

MatrixUnitElement psi_eval(const SemidirectQuiver& ctx, const PsiSetup& setup, const Word& w) {
    MatrixUnitElement out;
    out.row = w.target;
    out.col = w.source;
    for (const Letter& l : w.letters) {
        if (l.arrow < 0 || l.arrow >= ctx.qprime.arrow_count()) throw Error(ErrorKind::UnknownArrow, "letter outside Q'");
        const SemidirectElement& img = setup.image[l.arrow];
        out.value = multiply(setup.model, out.value, l.exp > 0 ? img : invert(setup.model, img));
    }
    return out;
}

PsiReport verify_psi_relations(const SemidirectQuiver& ctx, const Potential& wprime, const PsiSetup& setup) {
    PsiReport report;
    report.mode = setup.certificate ? "certificate" : "dehn";
    report.pass = true;
    for (int p = 0; p < ctx.qprime.arrow_count(); ++p) {
        if (ctx.is_iso(p)) continue;
        PsiArrowReport ar;
        ar.arrow = ctx.qprime.arrow(p).name;
        Element d = cyclic_derivative(ctx.qprime, wprime, p);

        struct Cluster {
            MatrixUnitElement rep;
            Rational coeff;
        };
        std::vector<Cluster> clusters;
        for (const auto& [word, c] : d.terms()) {
            MatrixUnitElement m = psi_eval(ctx, setup, word);
            bool placed = false;
            for (Cluster& cl : clusters) {
                if (cl.rep.row != m.row || cl.rep.col != m.col || cl.rep.value.power != m.value.power) continue;
                GroupWord diff = concat(m.value.word, inverse(cl.rep.value.word));
                bool same;
                if (setup.certificate) {
                    auto used = certify_trivial(diff, setup.relators, setup.max_conjugates);
                    same = used.has_value();
                    if (same) ar.conjugates = std::max(ar.conjugates, *used);
                } else {
                    same = setup.model.trivial(diff);
                }
                if (same) {
                    cl.coeff += c;
                    placed = true;
                    break;
                }
            }
            if (!placed) clusters.push_back(Cluster{m, c});
        }
        std::vector<const Cluster*> left;
        for (const Cluster& cl : clusters)
            if (cl.coeff != 0) left.push_back(&cl);
        ar.pass = left.empty();
        if (ar.pass) {
            ar.detail = d.is_zero() ? "derivative is zero" : std::to_string(d.size()) + " terms cancel";
        } else {
            std::map<long, Rational> by_power;
            for (const auto& [word, c] : d.terms()) by_power[psi_eval(ctx, setup, word).value.power] += c;
            if (by_power.size() > 1) {
                ar.detail = "degree mismatch:";
                for (const auto& [power, c] : by_power)
                    ar.detail += " " + format_rational(c) + "@" + std::to_string(power);
            } else {
                ar.detail = "group parts not shown equal: " + format_semidirect(setup.model, left.front()->rep.value);
            }
            report.pass = false;
        }
        report.arrows.push_back(std::move(ar));
    }
    return report;
}

} // namespace tessella
