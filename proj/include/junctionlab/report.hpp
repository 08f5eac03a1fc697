#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "junctionlab/cycles.hpp"
#include "junctionlab/junctions.hpp"
#include "junctionlab/model.hpp"
#include "junctionlab/monodromy.hpp"
#include "junctionlab/tracking.hpp"

namespace jl {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* SCHEMA_VERSION = "1";

struct AnalysisConfig {
    std::string template_name;  // exactly one of template_name / spec_path
    std::string spec_path;
    std::map<std::string, cplx> params;
    double radius = 0.0;  // 0 = template default point selection
    cplx base{0.0, 0.0};
    unsigned seed = 0;
    Tolerances tol;
    bool count_systems = false;  // include simple_systems_count
    bool with_monodromy = false;
    FamilyLoop loop;
};

// module error wrapped with the pipeline stage that raised it
struct StagedError {
    std::string stage;
    std::string kind;  // "parse_error" | "numeric_error" | "invariant_error"
    std::string message;
};
int exit_code_for(const std::string& kind);
ordered_json error_json(const StagedError& e);

struct AnalysisResult {
    Model model;
    KodairaRow kodaira;
    std::vector<cplx> points;
    std::vector<Path> paths;
    FiberBasis basis;
    std::vector<RootTrajectory> trajectories;
    std::vector<CycleResult> cycle_results;
    std::vector<ivec2> cycles;
    imat2 total;
    std::vector<jvec> kernel;
    std::vector<jvec> roots;
    AlgebraReport algebra;
    imat gram;
    long long gram_det = 1;
    long long simple_systems = -1;  // -1 = not computed
    // monodromy section (with_monodromy only)
    bool has_monodromy = false;
    AutomorphismResult automorphism;
    FoldResult folded;

    ordered_json report(const AnalysisConfig& cfg) const;
};

// full pipeline; throws StagedError
AnalysisResult run_analysis(const AnalysisConfig& cfg);

// CSV export: per-path trajectory_<k>.csv plus points.csv in `dir`
std::vector<std::string> write_trace_csv(const AnalysisResult& res, const std::string& dir);

}  // namespace jl
