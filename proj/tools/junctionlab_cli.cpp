#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "junctionlab/report.hpp"

namespace {

using jl::cplx;
using jl::ordered_json;

bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// literals: "1.5", "-2e-3", "i", "-i", "1.5i", "1+2i", "1e-3-0.5i"
cplx parse_cplx(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c) != 0; }),
            s.end());
    if (s.empty()) throw jl::parse_error("empty complex literal");
    double v = 0.0;
    if (parse_real(s, v)) return cplx(v, 0.0);
    if (s.back() == 'i' || s.back() == 'I') {
        std::string body = s.substr(0, s.size() - 1);
        size_t split = std::string::npos;
        for (size_t k = 1; k < body.size(); ++k)
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
                split = k;
        if (split == std::string::npos) {
            if (body.empty() || body == "+") return cplx(0.0, 1.0);
            if (body == "-") return cplx(0.0, -1.0);
            double im = 0.0;
            if (parse_real(body, im)) return cplx(0.0, im);
        } else {
            std::string re_s = body.substr(0, split);
            std::string im_s = body.substr(split);
            double re = 0.0, im = 0.0;
            bool ok = parse_real(re_s, re);
            if (im_s == "+") im = 1.0;
            else if (im_s == "-") im = -1.0;
            else ok = ok && parse_real(im_s, im);
            if (ok) return cplx(re, im);
        }
    }
    throw jl::parse_error("cannot parse complex value '" + s + "'");
}

cplx parse_base(const std::string& s) {
    size_t comma = s.find(',');
    if (comma == std::string::npos) {
        double re = 0.0;
        if (!parse_real(s, re)) throw jl::parse_error("cannot parse base point '" + s + "'");
        return cplx(re, 0.0);
    }
    double re = 0.0, im = 0.0;
    if (!parse_real(s.substr(0, comma), re) || !parse_real(s.substr(comma + 1), im))
        throw jl::parse_error("cannot parse base point '" + s + "' (expected re,im)");
    return cplx(re, im);
}

void parse_loop_spec(const std::string& s, jl::FamilyLoop& loop) {
    size_t pos = 0;
    while (pos < s.size()) {
        size_t end = s.find(',', pos);
        if (end == std::string::npos) end = s.size();
        std::string item = s.substr(pos, end - pos);
        pos = end + 1;
        if (item.empty()) continue;
        size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw jl::parse_error("loop spec items must be key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        double x = 0.0;
        if (!parse_real(val, x))
            throw jl::parse_error("cannot parse loop value '" + val + "'");
        if (key == "steps") {
            if (x < 1.0 || x != std::floor(x))
                throw jl::parse_error("loop steps must be a positive integer");
            loop.steps = static_cast<int>(x);
        } else if (key == "radius") {
            if (x < 0.0) throw jl::parse_error("loop radius must be nonnegative");
            loop.radius = x;
        } else {
            throw jl::parse_error("unknown loop key '" + key + "' (valid: steps, radius)");
        }
    }
}

struct CliOptions {
    std::string template_name;
    std::string spec_path;
    std::vector<std::string> params;
    double radius = 0.0;
    std::string base = "0,0";
    unsigned seed = 0;
    std::string out;
    std::string trace_dir = "trace";
    std::string loop_spec;
    bool simple_systems = false;
    jl::Tolerances tol;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--template", o.template_name, "built-in model template name");
    cmd->add_option("--spec", o.spec_path, "path to a model definition file");
    cmd->add_option("--param", o.params, "parameter override key=value (repeatable)");
    cmd->add_option("--radius", o.radius, "discriminant search radius (required with --spec)");
    cmd->add_option("--base", o.base, "base point re,im (default 0,0)");
    cmd->add_option("--seed", o.seed, "seed for randomized template deformations");
    cmd->add_option("--out", o.out, "write the JSON report to this file as well");
    cmd->add_option("--tol-root", o.tol.tol_root, "discriminant root residual bound");
    cmd->add_option("--tol-merge", o.tol.tol_merge, "pair coincidence tolerance");
    cmd->add_option("--sep-min", o.tol.sep_min, "minimum point separation");
    cmd->add_option("--angle-nudge", o.tol.angle_nudge, "path bend angle (radians)");
    cmd->add_option("--initial-steps", o.tol.initial_steps, "tracking grid before refinement");
    cmd->add_option("--max-halvings", o.tol.max_halvings, "adaptive halving budget");
    cmd->add_option("--enum-bound", o.tol.enum_bound, "junction enumeration dimension cap");
    cmd->add_option("--subset-budget", o.tol.subset_budget, "simple-system subset search cap");
    cmd->add_flag("--simple-systems", o.simple_systems, "count equivalent simple systems");
}

int emit_error(const jl::StagedError& e) {
    std::cout << jl::error_json(e).dump(2) << "\n";
    return jl::exit_code_for(e.kind);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"junction lattice analysis for deformed elliptic fibrations"};
    app.require_subcommand(1);

    CliOptions o;
    CLI::App* analyze = app.add_subcommand("analyze", "full pipeline, JSON report on stdout");
    add_common_options(analyze, o);
    CLI::App* trace = app.add_subcommand("trace", "export trajectory and point CSV files");
    add_common_options(trace, o);
    trace->add_option("--trace-dir", o.trace_dir, "output directory for CSV files");
    CLI::App* mono = app.add_subcommand("monodromy", "analysis plus loop monodromy and folding");
    add_common_options(mono, o);
    mono->add_option("--loop", o.loop_spec, "loop parameters steps=<n>,radius=<r>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error({"cli", "parse_error", e.what()});
    }

    jl::AnalysisConfig cfg;
    try {
        cfg.template_name = o.template_name;
        cfg.spec_path = o.spec_path;
        for (const auto& kv : o.params) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw jl::parse_error("--param expects key=value, got '" + kv + "'");
            cfg.params[kv.substr(0, eq)] = parse_cplx(kv.substr(eq + 1));
        }
        if (o.radius < 0.0) throw jl::parse_error("--radius must be positive");
        cfg.radius = o.radius;
        cfg.base = parse_base(o.base);
        cfg.seed = o.seed;
        cfg.tol = o.tol;
        cfg.count_systems = o.simple_systems;
        if (mono->parsed()) {
            cfg.with_monodromy = true;
            if (cfg.template_name.empty() && cfg.spec_path.empty())
                cfg.template_name = "I0star-slice";
            parse_loop_spec(o.loop_spec, cfg.loop);
            auto it = cfg.params.find("eps");
            if (it != cfg.params.end()) {
                if (it->second.imag() != 0.0 || it->second.real() == 0.0)
                    throw jl::parse_error("loop monodromy requires a real nonzero eps");
                cfg.loop.eps = it->second.real();
            }
        }
    } catch (const jl::parse_error& e) {
        return emit_error({"cli", "parse_error", e.what()});
    }

    try {
        jl::AnalysisResult res = jl::run_analysis(cfg);
        ordered_json rep = res.report(cfg);
        if (trace->parsed()) {
            auto files = jl::write_trace_csv(res, o.trace_dir);
            ordered_json tj;
            tj["schema_version"] = jl::SCHEMA_VERSION;
            tj["directory"] = o.trace_dir;
            ordered_json fl = ordered_json::array();
            for (const auto& f : files) fl.push_back(f);
            tj["files"] = fl;
            std::cout << tj.dump(2) << "\n";
        } else {
            std::cout << rep.dump(2) << "\n";
        }
        if (!o.out.empty()) {
            std::ofstream outf(o.out);
            if (!outf) return emit_error({"cli", "parse_error", "cannot write " + o.out});
            outf << rep.dump(2) << "\n";
        }
        return 0;
    } catch (const jl::StagedError& e) {
        return emit_error(e);
    }
}
