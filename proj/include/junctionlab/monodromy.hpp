#pragma once

#include <string>
#include <vector>

#include "junctionlab/junctions.hpp"
#include "junctionlab/model.hpp"

namespace jl {

// loop t(theta) = (1 - radius) + radius * exp(i theta); radius 1 circles the
// unit loop through t = 1, radius 0 is the constant slice
struct FamilyLoop {
    double eps = 1e-3;
    double radius = 1.0;
    int steps = 256;
};

Model slice_model(double eps, cplx t);
std::vector<cplx> slice_points(double eps, cplx t);

struct BraidOutcome {
    std::vector<std::string> word;  // "rot" and "ex<i>" events in loop order
    std::vector<ivec2> classes;     // prong classes after transport to theta = 2*pi
    imat transport;                 // junction-coordinate transport matrix
};

BraidOutcome extract_braid(const std::vector<ivec2>& classes0, const FamilyLoop& loop,
                           const Tolerances& tol);

// CCW slot shift of the base-fiber roots over the loop (0, 1 or 2)
int loop_fiber_rotation(const FamilyLoop& loop);
imat2 fiber_monodromy(int rotation);

struct AutomorphismResult {
    std::vector<std::string> braid_word;
    imat matrix;  // frame-fixed lattice automorphism
    imat transport;
    std::vector<int> sig;
    int fiber_rotation = 0;
    int order = 0;  // 0 = no power up to the search bound is the identity
};

AutomorphismResult induced_automorphism(const std::vector<ivec2>& classes0,
                                        const std::vector<jvec>& kernel,
                                        const std::vector<jvec>& roots,
                                        const JunctionBasis& B, const FamilyLoop& loop,
                                        const Tolerances& tol);

struct FoldResult {
    bool folding = false;
    std::string folded_algebra;
    imat folded_cartan;
    imat folded_gram;
    std::vector<int> perm;                // action on the stabilized simple system
    std::vector<std::vector<int>> orbits;
};

FoldResult fold(const AlgebraReport& rep, const std::vector<jvec>& roots, const imat& lambda,
                const JunctionBasis& B);

// classification over the full rank <= 4 Cartan catalog, direct sums included
std::string classify_cartan(const imat& cartan);

jvec apply_mat(const imat& M, const jvec& v);
imat mat_mul(const imat& A, const imat& B);
imat identity_mat(int n);

}  // namespace jl
