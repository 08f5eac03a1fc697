#pragma once
#include <array>
#include <vector>

#include "junctionlab/model.hpp"

namespace jl {

struct Tolerances {
    double tol_root = 1e-10;    // relative residual bound for discriminant roots
    double tol_merge = 1e-6;    // pair coincidence at the path end
    double sep_min = 1e-4;      // distinctness of points and of the survivor
    double angle_nudge = 1e-2;  // path bend around a blocking point, radians
    int initial_steps = 64;     // tracking grid before refinement
    int max_halvings = 16;      // adaptive step floor = 1/(initial_steps * 2^max_halvings)
    cplx base_offset{1.1e-3, 0.7e-3};  // base-point nudge when degenerate
    int enum_bound = 16;        // junction enumeration dimension cap
    long long subset_budget = 200000;  // simple-system subset search cap
};

// counterclockwise order with the cut just below the positive real axis;
// equal arguments break by increasing modulus
double ccw_key(cplx z);
void ccw_sort(std::vector<cplx>& pts);

// |p(s)| over the coefficient scale at |s|
double rel_residual(const Poly& p, cplx s);

// roots of 4f^3+27g^2 with |s| < radius, CCW-sorted, fully split
std::vector<cplx> find_discriminant_points(const Model& m, double radius,
                                           const Tolerances& tol = {});
// the `count` roots nearest the origin (ties by CCW angle), CCW-sorted
std::vector<cplx> nearest_discriminant_points(const Model& m, int count,
                                              const Tolerances& tol = {});

struct Path {
    int index = 0;                // position in CCW point order
    std::vector<cplx> waypoints;  // base, [bend], target
    bool bent = false;
};
std::vector<Path> build_paths(cplx base, const std::vector<cplx>& points,
                              const Tolerances& tol = {});

struct TrackSample {
    double t = 0.0;
    std::array<cplx, 3> roots;  // persistent labels, CCW at the base fiber
};
struct RootTrajectory {
    int path_index = 0;
    std::vector<TrackSample> samples;
    std::array<int, 2> merging_pair{0, 1};  // 0-based labels, ascending
    int survivor = 2;
    int refinements = 0;  // step halvings (diagnostics)
};
// follow the three fiber roots from the base to a discriminant point
RootTrajectory track_roots(const Model& m, const Path& path,
                           const Tolerances& tol = {});

}  // namespace jl
