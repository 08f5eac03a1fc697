#include "junctionlab/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace jl {

namespace {

bool log_enabled() {
    const char* v = std::getenv("JUNCTIONLAB_LOG");
    if (v == nullptr) return false;
    std::string s(v);
    return !s.empty() && s != "0" && s != "off" && s != "quiet";
}

void log_stage(const std::string& stage) {
    if (log_enabled()) std::cerr << "[junctionlab] stage: " << stage << "\n";
}

// run `fn` under a stage label, wrapping module errors for the CLI
template <typename F>
auto staged(const std::string& stage, F&& fn) {
    log_stage(stage);
    try {
        return fn();
    } catch (const parse_error& e) {
        throw StagedError{stage, "parse_error", e.what()};
    } catch (const numeric_error& e) {
        throw StagedError{stage, "numeric_error", e.what()};
    } catch (const invariant_error& e) {
        throw StagedError{stage, "invariant_error", e.what()};
    }
}

ordered_json cplx_json(cplx z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

ordered_json ivec2_json(const ivec2& v) { return ordered_json::array({v[0], v[1]}); }

ordered_json imat2_json(const imat2& m) {
    return ordered_json::array({ordered_json::array({m[0][0], m[0][1]}),
                                ordered_json::array({m[1][0], m[1][1]})});
}

ordered_json jvec_json(const jvec& v) {
    ordered_json a = ordered_json::array();
    for (long long x : v) a.push_back(x);
    return a;
}

ordered_json imat_json(const imat& m) {
    ordered_json a = ordered_json::array();
    for (const auto& row : m) a.push_back(jvec_json(row));
    return a;
}

}  // namespace

int exit_code_for(const std::string& kind) {
    if (kind == "parse_error") return 2;
    if (kind == "numeric_error") return 3;
    return 4;
}

ordered_json error_json(const StagedError& e) {
    return ordered_json{
        {"error", ordered_json{{"stage", e.stage}, {"type", e.kind}, {"message", e.message}}}};
}

AnalysisResult run_analysis(const AnalysisConfig& cfg) {
    AnalysisResult res;

    res.model = staged("model", [&] {
        if (cfg.template_name.empty() == cfg.spec_path.empty())
            throw parse_error("exactly one model source required: --template or --spec");
        if (!cfg.template_name.empty())
            return deform_template(cfg.template_name, cfg.params, cfg.seed);
        std::ifstream in(cfg.spec_path);
        if (!in) throw parse_error("cannot open model file: " + cfg.spec_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        ParsedModel pm = parse_model(text, cfg.params);
        Model m;
        m.f = pm.f;
        m.g = pm.g;
        return m;
    });
    res.kodaira = staged("model", [&] { return classify_kodaira(res.model); });

    res.points = staged("tracking", [&] {
        if (cfg.radius > 0.0) return find_discriminant_points(res.model, cfg.radius, cfg.tol);
        if (!cfg.template_name.empty()) {
            auto tm = find_template(cfg.template_name);
            if (tm) return nearest_discriminant_points(res.model, tm->n_expected, cfg.tol);
        }
        throw parse_error("a positive --radius is required for spec-file models");
    });
    res.basis = staged("cycles", [&] { return fiber_basis(res.model, cfg.base, cfg.tol); });
    res.paths = staged("tracking", [&] { return build_paths(res.basis.base, res.points, cfg.tol); });
    staged("tracking", [&] {
        for (const auto& p : res.paths) res.trajectories.push_back(track_roots(res.model, p, cfg.tol));
        return 0;
    });
    staged("cycles", [&] {
        for (const auto& tr : res.trajectories) {
            CycleResult c = vanishing_cycle(tr, res.basis, cfg.tol);
            res.cycle_results.push_back(c);
            res.cycles.push_back(c.cycle);
        }
        res.total = total_monodromy(res.cycles);
        return 0;
    });

    staged("junctions", [&] {
        JunctionBasis B = make_basis(res.cycles);
        res.kernel = kernel_basis(B);
        res.gram = kernel_gram(res.kernel, B);
        validate_gram(res.gram);
        res.gram_det = det_int(res.gram);
        res.roots = enumerate_roots(B, cfg.tol);
        res.algebra = identify_algebra(res.roots, B);
        // independent cross-check: rank + root count against the catalog,
        // skipped for direct sums the catalog does not list
        bool inCatalog = true;
        std::string byCounts;
        try {
            byCounts = algebra_of_counts(static_cast<int>(res.kernel.size()),
                                         static_cast<long long>(res.roots.size()));
        } catch (const invariant_error&) {
            inCatalog = false;
        }
        if (inCatalog && byCounts != res.algebra.algebra)
            throw invariant_error("algebra label disagrees with the rank/count catalog");
        if (cfg.count_systems && !res.roots.empty())
            res.simple_systems = count_simple_systems(
                res.roots, static_cast<int>(res.kernel.size()), B, cfg.tol);
        return 0;
    });

    if (cfg.with_monodromy) {
        staged("monodromy", [&] {
            auto tm = find_template(cfg.template_name);
            if (!tm || tm->name != "I0star-slice")
                throw parse_error("loop monodromy is defined for the I0star-slice family");
            JunctionBasis B = make_basis(res.cycles);
            res.automorphism =
                induced_automorphism(res.cycles, res.kernel, res.roots, B, cfg.loop, cfg.tol);
            res.folded = fold(res.algebra, res.roots, res.automorphism.matrix, B);
            res.has_monodromy = true;
            return 0;
        });
    }
    return res;
}

ordered_json AnalysisResult::report(const AnalysisConfig& cfg) const {
    ordered_json j;
    j["schema_version"] = SCHEMA_VERSION;

    ordered_json jcfg;
    if (!cfg.template_name.empty()) jcfg["template"] = cfg.template_name;
    if (!cfg.spec_path.empty()) jcfg["spec"] = cfg.spec_path;
    ordered_json jp;
    for (const auto& [k, v] : cfg.params) jp[k] = format_cplx(v);
    jcfg["params"] = jp;
    if (cfg.radius > 0.0) jcfg["radius"] = cfg.radius;
    jcfg["base"] = cplx_json(cfg.base);
    jcfg["seed"] = cfg.seed;
    jcfg["tolerances"] = ordered_json{{"tol_root", cfg.tol.tol_root},
                                      {"tol_merge", cfg.tol.tol_merge},
                                      {"sep_min", cfg.tol.sep_min},
                                      {"angle_nudge", cfg.tol.angle_nudge},
                                      {"initial_steps", cfg.tol.initial_steps},
                                      {"max_halvings", cfg.tol.max_halvings},
                                      {"enum_bound", cfg.tol.enum_bound},
                                      {"subset_budget", cfg.tol.subset_budget}};
    j["config"] = jcfg;

    Poly disc = model.discriminant();
    j["model"] = ordered_json{
        {"text", pretty_print(model.f, model.g)},
        {"kodaira", ordered_json{{"fiber", kodaira.fiber},
                                 {"algebra", kodaira.algebra},
                                 {"ord_f", order_at_zero(model.f)},
                                 {"ord_g", order_at_zero(model.g)},
                                 {"ord_d", order_at_zero(disc)}}}};

    ordered_json pts = ordered_json::array();
    for (size_t i = 0; i < points.size(); ++i)
        pts.push_back(ordered_json{
            {"index", i + 1}, {"re", points[i].real()}, {"im", points[i].imag()}});
    j["discriminant_points"] = pts;

    ordered_json cyc = ordered_json::array();
    for (const auto& c : cycles) cyc.push_back(ivec2_json(c));
    j["cycles"] = cyc;
    j["total_monodromy"] = imat2_json(total);
    j["total_monodromy_trace"] = trace(total);

    ordered_json ju;
    ju["N"] = cycles.size();
    ju["cycles"] = cyc;
    ju["kernel_rank"] = kernel.size();
    ordered_json kb = ordered_json::array();
    for (const auto& v : kernel) kb.push_back(jvec_json(v));
    ju["kernel_basis"] = kb;
    ju["roots_count"] = roots.size();
    ordered_json rj = ordered_json::array();
    for (const auto& v : roots) rj.push_back(jvec_json(v));
    ju["roots"] = rj;
    ju["cartan"] = imat_json(algebra.cartan);
    ju["algebra"] = algebra.algebra;
    if (simple_systems >= 0) ju["simple_systems_count"] = simple_systems;
    j["junctions"] = ju;

    if (has_monodromy) {
        ordered_json jm;
        jm["loop"] = ordered_json{{"eps", cfg.loop.eps},
                                  {"radius", cfg.loop.radius},
                                  {"steps", cfg.loop.steps}};
        ordered_json bw = ordered_json::array();
        for (const auto& w : automorphism.braid_word) bw.push_back(w);
        jm["braid_word"] = bw;
        jm["fiber_rotation"] = automorphism.fiber_rotation;
        jm["automorphism_matrix"] = imat_json(automorphism.matrix);
        if (automorphism.order > 0)
            jm["automorphism_order"] = automorphism.order;
        else
            jm["automorphism_order"] = "infinite-within-budget";
        jm["folding"] = folded.folding;
        if (!folded.folding) jm["note"] = "no folding";
        jm["folded_algebra"] = folded.folded_algebra;
        jm["folded_cartan"] = imat_json(folded.folded_cartan);
        j["monodromy"] = jm;
    }

    ordered_json diag;
    diag["base_nudge"] = cplx_json(basis.nudge);
    ordered_json refine = ordered_json::array();
    for (const auto& tr : trajectories) refine.push_back(tr.refinements);
    diag["refinements"] = refine;
    ordered_json bent = ordered_json::array();
    for (const auto& p : paths)
        if (p.bent) bent.push_back(p.index + 1);
    diag["bent_paths"] = bent;
    ordered_json par = ordered_json::array();
    for (const auto& c : cycle_results)
        par.push_back(ordered_json{{"m1", c.m1}, {"m2", c.m2}, {"even", c.even}});
    diag["crossing_parity"] = par;
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, rel_residual(disc, p));
    diag["max_point_residual"] = worst;
    j["diagnostics"] = diag;
    return j;
}

std::vector<std::string> write_trace_csv(const AnalysisResult& res, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path base(dir.empty() ? "." : dir);
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) throw StagedError{"trace", "parse_error", "cannot create directory: " + base.string()};
    std::vector<std::string> written;

    fs::path ptsfile = base / "points.csv";
    {
        std::ofstream out(ptsfile);
        if (!out) throw StagedError{"trace", "parse_error", "cannot write " + ptsfile.string()};
        out << "index,re,im\n";
        for (size_t i = 0; i < res.points.size(); ++i)
            out << (i + 1) << "," << format_double(res.points[i].real()) << ","
                << format_double(res.points[i].imag()) << "\n";
    }
    written.push_back(ptsfile.string());

    for (size_t k = 0; k < res.trajectories.size(); ++k) {
        const auto& tr = res.trajectories[k];
        fs::path f = base / ("trajectory_" + std::to_string(k + 1) + ".csv");
        std::ofstream out(f);
        if (!out) throw StagedError{"trace", "parse_error", "cannot write " + f.string()};
        out << "path_index,t,re1,im1,re2,im2,re3,im3,merging_pair,survivor\n";
        std::string pair = std::to_string(tr.merging_pair[0] + 1) + "-" +
                           std::to_string(tr.merging_pair[1] + 1);
        for (const auto& s : tr.samples) {
            out << (tr.path_index + 1) << "," << format_double(s.t);
            for (int m = 0; m < 3; ++m)
                out << "," << format_double(s.roots[m].real()) << ","
                    << format_double(s.roots[m].imag());
            out << "," << pair << "," << (tr.survivor + 1) << "\n";
        }
        written.push_back(f.string());
    }
    return written;
}

}  // namespace jl
