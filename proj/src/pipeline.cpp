#include "tessella/pipeline.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tessella {

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::NoChoiceFound ? kExitNoChoice : kExitInput; }

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

void emit_json(const std::string& dir, const std::string& name, const Json& j) {
    std::filesystem::path path = std::filesystem::path(dir) / name;
    write_text_file(path.string(), dump_json(j));
}

void validate_config(const PipelineConfig& c) {
    auto need = [](const std::string& path, const char* what) {
        if (path.empty()) throw Error(ErrorKind::InvalidInput, std::string(what) + " path is required");
        if (!std::filesystem::exists(path)) throw Error(ErrorKind::InvalidInput, std::string(what) + " not found: " + path);
    };
    need(c.tiling_path, "tiling");
    need(c.automorphism_path, "automorphism");
    if (c.psi_config_path) need(*c.psi_config_path, "presentation config");
    if (c.script_path) need(*c.script_path, "script");
    for (std::uint32_t q : c.fields)
        if (!is_prime(q)) throw Error(ErrorKind::InvalidInput, "q = " + std::to_string(q) + " is not prime");
    for (int d : c.dims)
        if (d < 1) throw Error(ErrorKind::InvalidInput, "dimension d must be at least 1");
    if (c.sample > 0 && !c.seed) throw Error(ErrorKind::InvalidInput, "sampling needs --seed");
    if (c.psi_mode != "certificate" && c.psi_mode != "dehn")
        throw Error(ErrorKind::InvalidInput, "psi mode must be certificate or dehn");
    if (c.generators.empty() != c.bases.empty())
        throw Error(ErrorKind::InvalidInput, "--generators and --bases go together");
    if (c.out_dir.empty()) throw Error(ErrorKind::InvalidInput, "output directory is required");
}

Quiver counting_quiver(const SemidirectQuiver& ctx) {
    Quiver b;
    for (const auto& v : ctx.qprime.vertex_names()) b.add_vertex(v);
    for (int p = 0; p < ctx.qprime.arrow_count(); ++p) {
        const Arrow& a = ctx.qprime.arrow(p);
        b.add_arrow(a.name, a.source, a.target, !ctx.is_iso(p));
    }
    return b;
}

Json count_report_to_json(const CountReport& r) {
    Json hist = Json::object();
    for (const auto& [v, n] : r.histogram) hist[std::to_string(v)] = n;
    Json j{{"q", r.q},
           {"d", r.d},
           {"total", r.total},
           {"f_inverse_0", r.f0},
           {"f_inverse_1", r.f1},
           {"crit", r.crit},
           {"three_way_disagreements", r.disagreements},
           {"histogram", hist},
           {"sampled", r.sampled},
           {"configuration_space", r.space}};
    if (r.sampled) j["samples"] = r.samples;
    // normalizations of the motivic count, kept symbolic
    j["prefactors"] = {"L^(-dim/2)", "[GL_d]^-1"};
    return j;
}

Json strata_report_to_json(const StrataReport& r) {
    Json j{{"total", r.total}, {"omega_nilpotent", r.nilpotent}, {"omega_invertible", r.invertible}, {"mixed", r.mixed}};
    if (!r.central_warning.empty()) j["warning"] = r.central_warning;
    return j;
}

Json probe_report_to_json(const ProbeReport& r) {
    return Json{{"q", r.q},
                {"weight_total", r.weight_total},
                {"weight_omega_nilpotent", r.weight_nilpotent},
                {"weight_omega_invertible", r.weight_invertible},
                {"total_vs_q_times_nilpotent", {r.lhs_total, r.rhs_total}},
                {"invertible_vs_q_minus_1_times_nilpotent", {r.lhs_invertible, r.rhs_invertible}},
                {"note", r.note}};
}

Json transport_check_to_json(const Quiver& qprime, const TransportCheck& c) {
    Json j{{"arrow", c.arrow},
           {"pass", c.pass},
           {"lhs", format_element(qprime, c.lhs)},
           {"rhs", format_element(qprime, c.rhs)}};
    if (!c.pass) j["witness"] = format_element(qprime, c.witness);
    return j;
}

Json gdga_report_to_json(const GinzburgDga& dga, const DSquaredReport& r) {
    Json j{{"ok", r.ok}, {"generators", dga.doubled.arrow_count()}};
    if (!r.ok) {
        j["generator"] = r.generator;
        j["witness"] = format_element(dga.doubled, r.witness);
        j["reason"] = r.reason;
    }
    return j;
}

Json orbit_quiver_to_json(const SemidirectQuiver& ctx) {
    Json j = quiver_to_json(ctx.qprime);
    Json deg = Json::object();
    for (int p = 0; p < ctx.qprime.arrow_count(); ++p) deg[ctx.qprime.arrow(p).name] = ctx.degree[p];
    j["degree"] = deg;
    j["n"] = ctx.n;
    return j;
}

Json choice_to_json(const Quiver& q, const OrbitChoice& choice) {
    Json gens = Json::array(), bases = Json::array();
    for (int a : choice.generators) gens.push_back(q.arrow(a).name);
    for (int v : choice.bases) bases.push_back(q.vertex_name(v));
    return Json{{"generators", gens}, {"bases", bases}};
}

OrbitChoice choice_from_names(const Quiver& q, const std::vector<std::string>& generators,
                              const std::vector<std::string>& bases) {
    OrbitChoice c;
    for (const auto& g : generators) c.generators.push_back(q.arrow_id(g));
    for (const auto& b : bases) c.bases.push_back(q.vertex_id(b));
    return c;
}

namespace {

class Runner {
public:
    Runner(const PipelineConfig& c, RunReport& r) : config(c), report(r) {}

    // Runs one stage; returns false when the pipeline must stop.
    template <class F>
    bool stage(const std::string& name, F body) {
        auto start = std::chrono::steady_clock::now();
        StageOutcome out{name, "pass", Json::object()};
        bool keep_going = true;
        try {
            bool ok = body(out.detail);
            if (!ok) {
                out.outcome = "fail";
                report.exit_code = std::max(report.exit_code, static_cast<int>(kExitVerifyFail));
            }
        } catch (const Error& e) {
            out.outcome = "error";
            out.detail["error"] = e.what();
            int code = exit_code_for(e.kind());
            if (report.exit_code == kExitPass || report.exit_code == kExitVerifyFail) report.exit_code = code;
            keep_going = false;
        }
        report.seconds[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.stages.push_back(std::move(out));
        return keep_going;
    }

    void skip(const std::string& name, const std::string& why) {
        report.stages.push_back(StageOutcome{name, "skipped", Json{{"reason", why}}});
    }

    void artifact(const std::string& name, const Json& j) {
        emit_json(config.out_dir, name, j);
        report.artifacts.push_back(name);
    }

    const PipelineConfig& config;
    RunReport& report;
};

} // namespace

RunReport run_pipeline(const PipelineConfig& config) {
    RunReport report;
    Runner run(config, report);

    BraneTiling tiling;
    TilingAutomorphism tphi;
    DualQuiver dual;
    std::vector<int> dimer_arrows;
    std::optional<SemidirectQuiver> ctx;
    Potential wprime;

    bool ok = run.stage("load", [&](Json& d) {
        validate_config(config);
        std::error_code ec;
        std::filesystem::create_directories(config.out_dir, ec);
        if (!std::filesystem::is_directory(config.out_dir))
            throw Error(ErrorKind::Io, "cannot create output directory " + config.out_dir);
        auto digest = [&](const std::string& path) {
            report.input_digests[std::filesystem::path(path).filename().string()] = sha256_hex(read_text_file(path));
        };
        digest(config.tiling_path);
        digest(config.automorphism_path);
        if (config.psi_config_path) digest(*config.psi_config_path);
        if (config.script_path) digest(*config.script_path);
        tiling = tiling_from_json(read_json_file(config.tiling_path));
        tphi = tiling_automorphism_from_json(read_json_file(config.automorphism_path));
        ValidationReport v = validate_tiling(tiling);
        if (!v.valid) {
            std::string why;
            for (const auto& s : v.violations) why += (why.empty() ? "" : "; ") + s;
            throw Error(ErrorKind::InvalidTiling, why);
        }
        validate_automorphism(tiling, tphi);
        d = {{"genus", v.genus}, {"vertices", v.vertices}, {"edges", v.edges}, {"faces", v.faces}, {"order", tphi.order}};
        return true;
    });
    if (!ok) return report;

    ok = run.stage("dual", [&](Json& d) {
        dual = dual_quiver(tiling);
        run.artifact("quiver.json", qpot_to_json(dual.quiver, dual.potential));
        d = {{"vertices", dual.quiver.vertex_count()}, {"arrows", dual.quiver.arrow_count()},
             {"potential", format_potential(dual.quiver, dual.potential)}};
        return true;
    });
    if (!ok) return report;

    ok = run.stage("refine", [&](Json& d) {
        QuiverAutomorphism induced = induced_automorphism(tiling, dual, tphi);
        if (orbit_sizes(dual.quiver, induced).all_full) {
            d["refined"] = false;
            return true;
        }
        RefineResult r = refine_tiling(tiling, tphi);
        tiling = r.tiling;
        tphi = r.phi;
        dual = dual_quiver(tiling);
        run.artifact("refined_tiling.json", tiling_to_json(tiling));
        run.artifact("refined_automorphism.json", tiling_automorphism_to_json(tphi));
        d = {{"refined", true}, {"added_vertices", r.added_vertices}, {"added_edges", r.added_edges}};
        return true;
    });
    if (!ok) return report;

    ok = run.stage("dimer", [&](Json& d) {
        if (!config.dimer.empty()) {
            for (const auto& name : config.dimer) dimer_arrows.push_back(dual.quiver.arrow_id(name));
            d["source"] = "given";
        } else {
            DimerResult r = equivariant_dimer(tiling, tphi);
            if (r.added_vertices > 0) {
                tiling = r.tiling;
                tphi = r.phi;
                dual = dual_quiver(tiling);
                run.artifact("dimer_tiling.json", tiling_to_json(tiling));
                run.artifact("dimer_automorphism.json", tiling_automorphism_to_json(tphi));
            }
            for (int e : r.edges) dimer_arrows.push_back(dual.arrow_of_edge[e]);
            d["source"] = "equivariant_dimer";
            d["added_vertices"] = r.added_vertices;
        }
        std::sort(dimer_arrows.begin(), dimer_arrows.end());
        Json names = Json::array();
        for (int a : dimer_arrows) names.push_back(dual.quiver.arrow(a).name);
        d["arrows"] = names;
        bool meets = meets_each_term_once(dual.quiver, dual.potential, dimer_arrows);
        d["meets_each_term_once"] = meets;
        run.artifact("dimer.json", Json{{"arrows", names}});
        return meets;
    });
    if (!ok) return report;

    ok = run.stage("choice", [&](Json& d) {
        QuiverAutomorphism phi = induced_automorphism(tiling, dual, tphi);
        OrbitChoice choice;
        if (!config.generators.empty()) {
            choice = choice_from_names(dual.quiver, config.generators, config.bases);
            d["source"] = "given";
        } else {
            ChoiceSearch s = choose_homogeneous_xi(dual.quiver, dual.potential, phi, dimer_arrows);
            choice = s.choice;
            d["source"] = "search";
            d["examined"] = s.examined;
        }
        ctx = build_orbit_quiver(dual.quiver, phi, choice);
        d["choice"] = choice_to_json(dual.quiver, choice);
        run.artifact("automorphism_quiver.json", quiver_automorphism_to_json(dual.quiver, phi));
        run.artifact("choice.json", choice_to_json(dual.quiver, choice));
        run.artifact("orbit_quiver.json", orbit_quiver_to_json(*ctx));
        return true;
    });
    if (!ok) return report;

    ok = run.stage("transport", [&](Json& d) {
        TransportResult t = transport_potential(*ctx, dual.potential);
        wprime = t.potential;
        d = {{"potential", format_potential(ctx->qprime, wprime)},
             {"homogeneous", t.homogeneous},
             {"degree", t.degree},
             {"inverse_free", t.inverse_free}};
        run.artifact("transport.json", qpot_to_json(ctx->qprime, wprime));
        return t.homogeneous && t.inverse_free;
    });
    if (!ok) return report;

    run.stage("verify-eq31", [&](Json& d) {
        Json checks = Json::array();
        bool all = true;
        for (int p = 0; p < ctx->qprime.arrow_count(); ++p) {
            if (ctx->is_iso(p)) continue;
            TransportCheck c = verify_transport_identity(*ctx, dual.potential, wprime, p);
            all = all && c.pass;
            checks.push_back(transport_check_to_json(ctx->qprime, c));
        }
        d["checks"] = checks;
        run.artifact("transport_identity.json", d);
        return all;
    });

    run.stage("gdga-check", [&](Json& d) {
        GinzburgDga dga = ginzburg_dga(dual.quiver, dual.potential);
        DSquaredReport r = check_d_squared(dga);
        d = gdga_report_to_json(dga, r);
        return r.ok;
    });

    run.stage("psi", [&](Json& d) {
        PsiSetup setup;
        if (config.psi_mode == "dehn") {
            if (!config.psi_config_path)
                throw Error(ErrorKind::MissingPhiAction, "--psi-mode dehn needs a presentation config with phi_star");
            setup = dehn_setup(*ctx, dehn_config_from_json(read_json_file(*config.psi_config_path)));
        } else {
            std::optional<std::vector<int>> tree;
            if (!config.tree.empty()) {
                tree.emplace();
                for (const auto& name : config.tree) tree->push_back(ctx->q.arrow_id(name));
            }
            std::optional<int> bp;
            if (!config.basepoint.empty()) bp = ctx->q.vertex_id(config.basepoint);
            setup = certificate_setup(*ctx, dual.potential, tree, bp, config.max_conjugates);
        }
        PsiReport r = verify_psi_relations(*ctx, wprime, setup);
        d = psi_report_to_json(r);
        run.artifact("psi.json", d);
        return r.pass;
    });

    if (config.script_path) {
        run.stage("check-script", [&](Json& d) {
            ScriptReport r = check_derivation_script(ctx->qprime, wprime,
                                                     derivation_script_from_json(read_json_file(*config.script_path)));
            d = script_report_to_json(r);
            run.artifact("script.json", d);
            return r.valid && r.targets_missing.empty();
        });
    } else {
        run.skip("check-script", "no script given");
    }

    run.stage("count", [&](Json& d) {
        Quiver b = counting_quiver(*ctx);
        Potential wb = parse_potential(b, format_potential(ctx->qprime, wprime));
        Json counts = Json::array();
        for (int dim : config.dims)
            for (std::uint32_t q : config.fields) {
                EnumerateOptions opt;
                opt.threads = config.threads;
                std::uint64_t space = configuration_space(b, dim, q);
                if (space > opt.exhaustive_limit) {
                    if (config.sample == 0) {
                        counts.push_back({{"q", q}, {"d", dim}, {"skipped", "configuration space too large"}});
                        continue;
                    }
                    opt.sample = true;
                    opt.samples = config.sample;
                    opt.seed = *config.seed;
                }
                counts.push_back(count_report_to_json(enumerate_reps(b, wb, dim, q, opt)));
            }
        d["counts"] = counts;
        run.artifact("counts.json", counts);
        return true;
    });

    emit_json(config.out_dir, "report.json", run_report_to_json(report));
    Json timing = Json::object();
    for (const auto& [name, s] : report.seconds) timing[name] = s;
    emit_json(config.out_dir, "timing.json", timing);
    return report;
}

Json run_report_to_json(const RunReport& report) {
    Json stages = Json::array();
    for (const auto& s : report.stages) stages.push_back({{"name", s.name}, {"outcome", s.outcome}, {"detail", s.detail}});
    return Json{{"tool", "tessella"},
                {"version", kToolVersion},
                {"stages", stages},
                {"artifacts", report.artifacts},
                {"input_digests", report.input_digests},
                {"exit_code", report.exit_code}};
}

} // namespace tessella
