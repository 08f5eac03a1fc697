#pragma once
#include "junctionlab/tracking.hpp"

namespace jl {

using ivec2 = std::array<long long, 2>;
using imat2 = std::array<std::array<long long, 2>, 2>;

// skew form on the base-fiber H1 basis: (a,b) x (c,d) = ad - bc,
// with Z1=(1,0), Z2=(0,1), Z3=(-1,-1) so Z1.Z2 = Z2.Z3 = Z3.Z1 = 1
long long skew(const ivec2& a, const ivec2& b);

struct FiberBasis {
    cplx base;                  // effective base point (possibly nudged)
    cplx nudge{0.0, 0.0};       // offset applied to the requested base
    std::array<cplx, 3> roots;  // base-fiber roots, CCW labels 0,1,2
};
// smooth, non-collinear base fiber; nudges the base and records it otherwise
FiberBasis fiber_basis(const Model& m, cplx base, const Tolerances& tol = {});

struct CycleResult {
    ivec2 cycle{0, 0};  // vanishing cycle class in the (Z1, Z2) basis
    int m1 = 0;         // interior crossings of the merge segment
    int m2 = 0;         // endpoint-side contribution
    bool even = true;
};
// class of the collapsing cycle, decided by the parity of segment crossings
CycleResult vanishing_cycle(const RootTrajectory& traj, const FiberBasis& basis,
                            const Tolerances& tol = {});

imat2 pl_matrix(const ivec2& cycle);  // transvection x -> x - (x.c) c
// product over paths, the first path's matrix applied first
imat2 total_monodromy(const std::vector<ivec2>& cycles);
long long trace(const imat2& m);

}  // namespace jl
