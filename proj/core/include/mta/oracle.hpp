#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mta/group.hpp"
#include "mta/matrix.hpp"
#include "mta/subspace.hpp"
#include "mta/tensor.hpp"

namespace mta {

// Defining data for a symmetry group: finitely many group elements plus a
// basis of infinitesimal generators. A tensor is invariant for the group
// exactly when it is fixed by every listed element and annihilated by every
// listed infinitesimal generator.
struct GroupPresentation {
  std::vector<CMatrix> finite_generators;
  std::vector<CMatrix> lie_basis;
};

// Exact mode is refused for slk:k with k outside {1, 2, 4}: the needed root
// of unity has no Gaussian-rational representation.
GroupPresentation group_presentation(const GroupSpec& g, ScalarMode mode);

// Infinitesimal action of x: apply x to each contravariant slot and -x^T to
// each covariant slot, summing the results.
MixedTensor derivation_action(const CMatrix& x, const MixedTensor& z);

// Space of grade-(k, l) tensors fixed by the whole group, computed as the
// joint kernel of the presentation's constraints. Exact mode reduces sparse
// constraint rows over Gaussian rationals; float mode intersects constraint
// kernels by repeated SVD.
SubspaceBasis invariant_space(const GroupSpec& g, int k, int l, ScalarMode mode,
                              double tol = kDefaultRankTol);

// Closes a generating set of exact-mode matrices under multiplication.
// Throws std::runtime_error past max_size elements.
std::vector<CMatrix> enumerate_finite_group(const std::vector<CMatrix>& generators,
                                            std::size_t max_size = 100000);

// Group average (1/|elements|) sum over rho(u) z of the listed elements.
MixedTensor reynolds_average(const std::vector<CMatrix>& elements,
                             const MixedTensor& z);

// Invariant space of a finite group as the image of its averaging projector.
SubspaceBasis reynolds_invariant_space(int n, int k, int l,
                                       const std::vector<CMatrix>& elements,
                                       ScalarMode mode,
                                       double tol = kDefaultRankTol);

enum class CompactFamily { kUnitary, kRealOrthogonal, kSpecialUnitary };

// Haar-distributed sample, float mode.
CMatrix haar_sample(CompactFamily family, int n, std::mt19937_64& rng);

struct MonteCarloResult {
  SubspaceBasis space;  // top eigenspace of the averaged action, first batch
  int dim_first = 0;
  int dim_second = 0;
  int samples = 0;
};

// Estimates the invariant space from the eigenvalue-one eigenspace of an
// empirical Haar average of the tensor action. Invariant tensors are fixed
// by every sample, so their eigenvalue is exactly one and eigen_cutoff only
// has to separate them from the contracted complement. Runs two
// independently seeded batches and throws std::runtime_error when their
// ranks disagree.
MonteCarloResult monte_carlo_invariant_space(CompactFamily family, int n, int k,
                                             int l, int samples, std::uint64_t seed,
                                             double tol = kDefaultRankTol,
                                             double eigen_cutoff = 1e-6);

}  // namespace mta
