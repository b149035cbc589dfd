#include "tessella/pipeline.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

using namespace tessella;

namespace {

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct Output {
    std::string path;

    void emit(const Json& j) const {
        if (path.empty())
            std::cout << dump_json(j);
        else
            write_text_file(path, dump_json(j));
    }
};

// Where Q, W and phi come from: a tiling with a half-edge permutation, or a
// quiver-with-potential file with vertex/arrow permutations.
struct Source {
    std::string tiling;
    std::string qpot;
    std::string phi;
    std::string generators;
    std::string bases;
    std::string dimer;

    void add(CLI::App* app, bool need_phi = true) {
        auto* t = app->add_option("--tiling", tiling, "tiling file");
        auto* q = app->add_option("--qpot", qpot, "quiver with potential file");
        t->excludes(q);
        auto* p = app->add_option("--phi", phi, "automorphism file (half_edge_perm, or vertex_perm + arrow_perm)");
        if (need_phi) p->required();
        app->add_option("--generators", generators, "orbit generators, comma separated");
        app->add_option("--bases", bases, "base vertex per vertex orbit, comma separated");
        app->add_option("--dimer", dimer, "dimer arrows; the choice is then searched for homogeneity");
    }

    struct Loaded {
        Quiver q;
        Potential w;
        QuiverAutomorphism phi;
    };

    Loaded load() const {
        Loaded out;
        if (!tiling.empty()) {
            BraneTiling t = tiling_from_json(read_json_file(tiling));
            DualQuiver d = dual_quiver(t);
            out.q = d.quiver;
            out.w = d.potential;
            if (!phi.empty()) {
                TilingAutomorphism tp = tiling_automorphism_from_json(read_json_file(phi));
                validate_automorphism(t, tp);
                out.phi = induced_automorphism(t, d, tp);
            }
        } else if (!qpot.empty()) {
            auto [q, w] = qpot_from_json(read_json_file(qpot));
            out.q = std::move(q);
            out.w = std::move(w);
            if (!phi.empty()) {
                Json j = read_json_file(phi);
                if (j.contains("half_edge_perm"))
                    throw Error(ErrorKind::InvalidInput, "a half-edge permutation needs --tiling");
                out.phi = quiver_automorphism_from_json(out.q, j);
            }
        } else {
            throw Error(ErrorKind::InvalidInput, "give --tiling or --qpot");
        }
        if (phi.empty()) out.phi = identity_automorphism(out.q);
        validate_automorphism(out.q, out.phi);
        return out;
    }

    SemidirectQuiver context(const Loaded& l) const {
        OrbitChoice choice;
        if (!generators.empty() || !bases.empty()) {
            choice = choice_from_names(l.q, split_names(generators), split_names(bases));
        } else if (!dimer.empty()) {
            std::vector<int> arrows;
            for (const auto& n : split_names(dimer)) arrows.push_back(l.q.arrow_id(n));
            choice = choose_homogeneous_xi(l.q, l.w, l.phi, arrows).choice;
        } else {
            choice = default_choice(l.q, l.phi);
        }
        return build_orbit_quiver(l.q, l.phi, choice);
    }
};

Element read_element(const Quiver& q, const std::string& spec) {
    if (std::filesystem::exists(spec)) {
        Json j = read_json_file(spec);
        return element_from_json(q, j.is_object() && j.contains("element") ? j.at("element") : j);
    }
    return parse_element(q, spec);
}

std::pair<Quiver, Potential> read_qpot(const std::string& path) { return qpot_from_json(read_json_file(path)); }

int verdict(bool pass) { return pass ? kExitPass : kExitVerifyFail; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tessella: brane tilings, orbit quivers and their verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Output out;
    int code = kExitPass;
    std::function<void()> action;

    auto with_output = [&](CLI::App* sub) { sub->add_option("-o,--output", out.path, "write JSON here instead of stdout"); };

    // dual
    std::string tiling_path;
    auto* dual = app.add_subcommand("dual", "dual quiver and potential of a tiling");
    dual->add_option("tiling", tiling_path, "tiling file")->required();
    with_output(dual);
    dual->callback([&] {
        action = [&] {
            BraneTiling t = tiling_from_json(read_json_file(tiling_path));
            ValidationReport v = validate_tiling(t);
            if (!v.valid) {
                std::string why;
                for (const auto& s : v.violations) why += (why.empty() ? "" : "; ") + s;
                throw Error(ErrorKind::InvalidTiling, why);
            }
            DualQuiver d = dual_quiver(t);
            out.emit(qpot_to_json(d.quiver, d.potential));
        };
    });

    // refine / dimer
    std::string auto_path;
    auto* refine = app.add_subcommand("refine", "refine a tiling until every face orbit is full");
    refine->add_option("tiling", tiling_path, "tiling file")->required();
    refine->add_option("--phi", auto_path, "tiling automorphism file")->required();
    with_output(refine);
    refine->callback([&] {
        action = [&] {
            BraneTiling t = tiling_from_json(read_json_file(tiling_path));
            RefineResult r = refine_tiling(t, tiling_automorphism_from_json(read_json_file(auto_path)));
            out.emit(Json{{"tiling", tiling_to_json(r.tiling)},
                          {"automorphism", tiling_automorphism_to_json(r.phi)},
                          {"added_vertices", r.added_vertices},
                          {"added_edges", r.added_edges}});
        };
    });

    auto* dimer = app.add_subcommand("dimer", "phi-equivariant perfect matching");
    dimer->add_option("tiling", tiling_path, "tiling file")->required();
    dimer->add_option("--phi", auto_path, "tiling automorphism file")->required();
    with_output(dimer);
    dimer->callback([&] {
        action = [&] {
            BraneTiling t = tiling_from_json(read_json_file(tiling_path));
            DimerResult r = equivariant_dimer(t, tiling_automorphism_from_json(read_json_file(auto_path)));
            DualQuiver d = dual_quiver(r.tiling);
            Json arrows = Json::array();
            std::vector<int> ids;
            for (int e : r.edges) ids.push_back(d.arrow_of_edge[e]);
            std::sort(ids.begin(), ids.end());
            for (int a : ids) arrows.push_back(d.quiver.arrow(a).name);
            Json j{{"edges", r.edges},
                   {"arrows", arrows},
                   {"added_vertices", r.added_vertices},
                   {"added_edges", r.added_edges}};
            if (r.added_vertices > 0) {
                j["tiling"] = tiling_to_json(r.tiling);
                j["automorphism"] = tiling_automorphism_to_json(r.phi);
            }
            out.emit(j);
        };
    });

    // choice, orbit quiver, transport, transport identity
    Source src;
    auto* choose = app.add_subcommand("choose-xi", "search an orbit choice making the transported potential homogeneous");
    src.add(choose);
    with_output(choose);
    choose->callback([&] {
        action = [&] {
            if (src.dimer.empty()) throw Error(ErrorKind::InvalidInput, "choose-xi needs --dimer");
            auto l = src.load();
            std::vector<int> arrows;
            for (const auto& n : split_names(src.dimer)) arrows.push_back(l.q.arrow_id(n));
            ChoiceSearch s = choose_homogeneous_xi(l.q, l.w, l.phi, arrows);
            Json j = choice_to_json(l.q, s.choice);
            j["examined"] = s.examined;
            out.emit(j);
        };
    });

    auto* orbit = app.add_subcommand("orbit-quiver", "build Q' for an orbit choice");
    src.add(orbit);
    with_output(orbit);
    orbit->callback([&] {
        action = [&] {
            auto l = src.load();
            SemidirectQuiver ctx = src.context(l);
            Json j = orbit_quiver_to_json(ctx);
            j["choice"] = choice_to_json(l.q, ctx.choice);
            out.emit(j);
        };
    });

    auto* transport = app.add_subcommand("transport", "transport W to the orbit quiver");
    src.add(transport);
    with_output(transport);
    transport->callback([&] {
        action = [&] {
            auto l = src.load();
            SemidirectQuiver ctx = src.context(l);
            TransportResult t = transport_potential(ctx, l.w);
            Json j = qpot_to_json(ctx.qprime, t.potential);
            j["homogeneous"] = t.homogeneous;
            j["degree"] = t.degree;
            j["inverse_free"] = t.inverse_free;
            j["choice"] = choice_to_json(l.q, ctx.choice);
            out.emit(j);
        };
    });

    bool all_arrows = false;
    std::string one_arrow;
    auto* identity = app.add_subcommand("verify-eq31", "check a dW'/da = n xi(a dW/da) for generating arrows");
    src.add(identity);
    identity->add_flag("--all", all_arrows, "every generating arrow (default)");
    identity->add_option("--arrow", one_arrow, "a single generating arrow");
    with_output(identity);
    identity->callback([&] {
        action = [&] {
            auto l = src.load();
            SemidirectQuiver ctx = src.context(l);
            Potential wp = transport_potential(ctx, l.w).potential;
            Json checks = Json::array();
            bool pass = true;
            for (int p = 0; p < ctx.qprime.arrow_count(); ++p) {
                if (ctx.is_iso(p)) continue;
                if (!one_arrow.empty() && ctx.qprime.arrow(p).name != one_arrow) continue;
                TransportCheck c = verify_transport_identity(ctx, l.w, wp, p);
                pass = pass && c.pass;
                checks.push_back(transport_check_to_json(ctx.qprime, c));
            }
            if (!one_arrow.empty() && checks.empty())
                throw Error(ErrorKind::UnknownArrow, one_arrow + " is not a generating arrow");
            out.emit(Json{{"pass", pass}, {"checks", checks}});
            code = verdict(pass);
        };
    });

    // path algebra
    std::string qpot_path, arrow_name;
    int exponent = 1;
    auto* derive = app.add_subcommand("derive", "cyclic derivative of the potential");
    derive->add_option("qpot", qpot_path, "quiver with potential file")->required();
    derive->add_option("--arrow", arrow_name, "arrow name")->required();
    derive->add_option("--exp", exponent, "letter exponent (1 or -1)")->check(CLI::IsMember({1, -1}));
    with_output(derive);
    derive->callback([&] {
        action = [&] {
            auto [q, w] = read_qpot(qpot_path);
            Element d = cyclic_derivative(q, w, q.arrow_id(arrow_name), exponent);
            out.emit(Json{{"arrow", arrow_name}, {"derivative", element_to_json(q, d)}, {"text", format_element(q, d)}});
        };
    });

    auto* gdga = app.add_subcommand("gdga-check", "check d^2 = 0 on the Ginzburg dga");
    gdga->add_option("qpot", qpot_path, "quiver with potential file")->required();
    with_output(gdga);
    gdga->callback([&] {
        action = [&] {
            auto [q, w] = read_qpot(qpot_path);
            GinzburgDga dga = ginzburg_dga(q, w);
            DSquaredReport r = check_d_squared(dga);
            out.emit(gdga_report_to_json(dga, r));
            code = verdict(r.ok);
        };
    });

    // presentation
    std::string psi_mode = "certificate", config_path, tree, basepoint;
    int max_conj = 8;
    auto* psi = app.add_subcommand("psi-verify", "check that Psi kills the derivative relations of W'");
    src.add(psi);
    psi->add_option("--psi-mode", psi_mode, "certificate or dehn")->check(CLI::IsMember({"certificate", "dehn"}));
    psi->add_option("--config", config_path, "presentation config (genus, phi_star, order, arrow_classes)");
    psi->add_option("--tree", tree, "maximal tree arrows, comma separated");
    psi->add_option("--basepoint", basepoint, "basepoint vertex");
    psi->add_option("--max-conjugates", max_conj, "certificate search bound");
    with_output(psi);
    psi->callback([&] {
        action = [&] {
            auto l = src.load();
            SemidirectQuiver ctx = src.context(l);
            Potential wp = transport_potential(ctx, l.w).potential;
            PsiSetup setup;
            if (psi_mode == "dehn") {
                if (config_path.empty())
                    throw Error(ErrorKind::MissingPhiAction, "--psi-mode dehn needs --config with phi_star");
                setup = dehn_setup(ctx, dehn_config_from_json(read_json_file(config_path)));
            } else {
                std::optional<std::vector<int>> t;
                if (!tree.empty()) {
                    t.emplace();
                    for (const auto& n : split_names(tree)) t->push_back(l.q.arrow_id(n));
                }
                std::optional<int> bp;
                if (!basepoint.empty()) bp = l.q.vertex_id(basepoint);
                setup = certificate_setup(ctx, l.w, t, bp, max_conj);
            }
            PsiReport r = verify_psi_relations(ctx, wp, setup);
            out.emit(psi_report_to_json(r));
            code = verdict(r.pass);
        };
    });

    std::string script_path;
    auto* script = app.add_subcommand("check-script", "check a relation-derivation script against W'");
    script->add_option("script", script_path, "script file")->required();
    src.add(script, false);
    with_output(script);
    script->callback([&] {
        action = [&] {
            auto l = src.load();
            Quiver qp;
            Potential wp;
            if (l.phi.order > 1 || !src.generators.empty()) {
                SemidirectQuiver ctx = src.context(l);
                qp = ctx.qprime;
                wp = transport_potential(ctx, l.w).potential;
            } else {
                qp = l.q;
                wp = l.w;
            }
            ScriptReport r = check_derivation_script(qp, wp, derivation_script_from_json(read_json_file(script_path)));
            out.emit(script_report_to_json(r));
            code = verdict(r.valid && r.targets_missing.empty());
        };
    });

    // counting
    int dim = 1;
    std::uint32_t field = 2;
    std::string omega;
    std::uint64_t samples = 0;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    auto* count = app.add_subcommand("count", "point counts of representations over F_q");
    count->add_option("--qpot", qpot_path, "quiver with potential file (localized arrows are invertible)")->required();
    count->add_option("-d", dim, "dimension at every vertex");
    count->add_option("-q", field, "prime field size");
    count->add_option("--omega", omega, "element file or text; adds the omega strata");
    count->add_option("--sample", samples, "sample this many representations instead of enumerating");
    count->add_option("--seed", seed, "seed for sampling");
    count->add_option("--threads", threads, "worker threads (capped by TESSELLA_THREADS)");
    with_output(count);
    count->callback([&] {
        action = [&] {
            auto [q, w] = read_qpot(qpot_path);
            EnumerateOptions opt;
            opt.threads = threads;
            if (samples > 0) {
                if (!seed) throw Error(ErrorKind::InvalidInput, "--sample needs --seed");
                opt.sample = true;
                opt.samples = samples;
                opt.seed = *seed;
            }
            Json j = count_report_to_json(enumerate_reps(q, w, dim, field, opt));
            if (!omega.empty()) j["strata"] = strata_report_to_json(stratify_by_omega(q, w, read_element(q, omega), dim, field, threads));
            out.emit(j);
        };
    });

    auto* probe = app.add_subcommand("probe", "degree-one comparison of omega-strata weights (report only)");
    probe->add_option("--qpot", qpot_path, "quiver with potential file")->required();
    probe->add_option("-q", field, "odd prime");
    probe->add_option("--omega", omega, "element file or text")->required();
    probe->add_option("--threads", threads, "worker threads");
    with_output(probe);
    probe->callback([&] {
        action = [&] {
            auto [q, w] = read_qpot(qpot_path);
            out.emit(probe_report_to_json(conjecture_probe_d1(q, w, read_element(q, omega), field, threads)));
        };
    });

    // pipeline
    PipelineConfig pc;
    std::string p_dimer, p_gens, p_bases, p_tree, p_fields = "2,3", p_dims = "1", p_config, p_script;
    std::optional<std::uint64_t> p_seed;
    auto* pipe = app.add_subcommand("pipeline", "tile, dual, refine, dimer, choice, transport, verify, count");
    pipe->add_option("--tiling", pc.tiling_path, "tiling file")->required();
    pipe->add_option("--phi", pc.automorphism_path, "tiling automorphism file")->required();
    pipe->add_option("--psi-config", p_config, "presentation config for Dehn mode");
    pipe->add_option("--psi-mode", pc.psi_mode, "certificate or dehn");
    pipe->add_option("--script", p_script, "derivation script");
    pipe->add_option("--dimer", p_dimer, "dimer arrows (default: equivariant_dimer)");
    pipe->add_option("--generators", p_gens, "orbit generators (default: search)");
    pipe->add_option("--bases", p_bases, "base vertices");
    pipe->add_option("--tree", p_tree, "maximal tree for Psi");
    pipe->add_option("--basepoint", pc.basepoint, "basepoint for Psi");
    pipe->add_option("--max-conjugates", pc.max_conjugates, "certificate search bound");
    pipe->add_option("--fields", p_fields, "primes for counting, comma separated");
    pipe->add_option("--dims", p_dims, "dimensions for counting, comma separated");
    pipe->add_option("--sample", pc.sample, "sample size when a count is too large to enumerate");
    pipe->add_option("--seed", p_seed, "sampling seed");
    pipe->add_option("--threads", pc.threads, "worker threads");
    pipe->add_option("--out", pc.out_dir, "output directory")->required();
    pipe->callback([&] {
        action = [&] {
            if (!p_config.empty()) pc.psi_config_path = p_config;
            if (!p_script.empty()) pc.script_path = p_script;
            pc.dimer = split_names(p_dimer);
            pc.generators = split_names(p_gens);
            pc.bases = split_names(p_bases);
            pc.tree = split_names(p_tree);
            pc.seed = p_seed;
            pc.fields.clear();
            for (const auto& f : split_names(p_fields)) pc.fields.push_back(static_cast<std::uint32_t>(std::stoul(f)));
            pc.dims.clear();
            for (const auto& d : split_names(p_dims)) pc.dims.push_back(std::stoi(d));
            RunReport r = run_pipeline(pc);
            std::cout << dump_json(run_report_to_json(r));
            code = r.exit_code;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }
    try {
        if (action) action();
    } catch (const Error& e) {
        std::cerr << "tessella: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "tessella: " << e.what() << "\n";
        return kExitInput;
    }
    return code;
}
