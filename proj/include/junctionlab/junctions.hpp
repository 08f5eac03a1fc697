#pragma once

#include <string>
#include <vector>

#include "junctionlab/cycles.hpp"
#include "junctionlab/tracking.hpp"

namespace jl {

using jvec = std::vector<long long>;
using imat = std::vector<std::vector<long long>>;

// prong basis: one vanishing cycle per path, in path order
struct JunctionBasis {
    std::vector<ivec2> cycles;
    imat G;  // G[k][j] = skew(cycles[k], cycles[j])
};

JunctionBasis make_basis(const std::vector<ivec2>& cycles);

long long self_pairing(const jvec& J, const JunctionBasis& B);
// polarized value 2*<J,K>; always an integer, even on the zero-charge lattice
long long pairing2(const jvec& J, const jvec& K, const JunctionBasis& B);
long long pairing(const jvec& J, const jvec& K, const JunctionBasis& B);
ivec2 asymptotic_charge(const jvec& J, const JunctionBasis& B);

// basis of {J : a(J) = 0} via integer column reduction of the charge matrix
std::vector<jvec> kernel_basis(const JunctionBasis& B);
// positive definite form on the kernel lattice: -pairing
imat kernel_gram(const std::vector<jvec>& kb, const JunctionBasis& B);
void validate_gram(const imat& gram);  // even diagonal, positive definite
long long det_int(imat m);             // exact integer determinant (Bareiss)

std::vector<jvec> enumerate_weights(const JunctionBasis& B, const ivec2& charge,
                                    long long norm, long long box, const Tolerances& tol);
// dual-route root enumeration: box scan and lattice-vector enumeration must agree
std::vector<jvec> enumerate_roots(const JunctionBasis& B, const Tolerances& tol);
// norm-`target` vectors of a positive definite integer Gram matrix
std::vector<jvec> short_vectors(const imat& gram, long long target);

struct AlgebraReport {
    std::string algebra;
    std::vector<jvec> simples;
    imat cartan;
};
// half of the root set selected by a deterministic generic functional
std::vector<jvec> positive_roots(const std::vector<jvec>& roots, const JunctionBasis& B);
AlgebraReport identify_algebra(const std::vector<jvec>& roots, const JunctionBasis& B);
// classify a symmetric generalized Cartan matrix with off-diagonals in {0,-1}
std::string classify_ade(const imat& cartan);
long long count_simple_systems(const std::vector<jvec>& roots, int rank,
                               const JunctionBasis& B, const Tolerances& tol);
// independent (rank, root count) lookup used to cross-check identify_algebra
std::string algebra_of_counts(int rank, long long n_roots);

}  // namespace jl
