#pragma once

#include <Eigen/Dense>
#include <random>
#include <utility>
#include <vector>

#include "projlim/expfam.hpp"

namespace projlim {

inline constexpr int kMaxAtoms = 64;

/**
 * @brief Finite discrete base measure: atom ids 0..M-1 with weights summing
 *        to one (within 1e-12).
 *
 * The atoms stand in for any fixed countable generator of a continuous base
 * space; all parameter arithmetic below only ever touches their weights.
 */
struct AtomBase {
  Eigen::VectorXd g0;

  explicit AtomBase(Eigen::VectorXd weights);
  int atom_count() const { return static_cast<int>(g0.size()); }
};

/**
 * @brief A partition of the atom set into disjoint nonempty cells.
 *
 * Partial order: I precedes J when J refines I, i.e. every cell of J is
 * contained in some cell of I. Cells are stored sorted (and each cell's ids
 * sorted) so equality is structural.
 */
struct PartitionIndex {
  std::vector<std::vector<int>> cells;

  PartitionIndex(std::vector<std::vector<int>> cells_, int atom_count);
  int atom_count() const { return atom_count_; }
  int cell_count() const { return static_cast<int>(cells.size()); }
  int cell_of_atom(int atom) const;  // index into cells

  bool operator==(const PartitionIndex&) const = default;

 private:
  int atom_count_ = 0;
};

PartitionIndex singleton_partition(int atom_count);  // finest
PartitionIndex trivial_partition(int atom_count);    // one cell

bool is_refinement(const PartitionIndex& coarse, const PartitionIndex& fine);

/// The unique coarse cell containing the given fine cell.
/// @throws ordering_error if fine does not refine coarse.
int project_cell(const PartitionIndex& coarse, const PartitionIndex& fine,
                 int fine_cell);

/// Cellwise probability sums along the coarsening.
/// @throws domain_error if theta_fine is not on the simplex of fine.
Eigen::VectorXd project_simplex(const PartitionIndex& coarse,
                                const PartitionIndex& fine,
                                const Eigen::VectorXd& theta_fine);

/// Per-cell parameters alpha * sum of base weights in the cell.
/// @throws domain_error on a zero-mass cell: each parameter must be > 0.
Eigen::VectorXd dirichlet_marginal(const AtomBase& base, double alpha,
                                   const PartitionIndex& partition);

void validate_dirichlet_params(const Eigen::VectorXd& params);

/**
 * @brief Conjugate update at the atom level.
 *
 * The unnormalized parameter alpha * G0 + sum of atom point masses is
 * returned in normalized form: concentration alpha + n and base mixture
 * (n / (alpha+n)) * empirical + (alpha / (alpha+n)) * G0. Both forms are
 * computed and must agree within 1e-12; a mismatch throws numeric_error.
 */
struct DpPosterior {
  double alpha;
  Eigen::VectorXd weights;
};

DpPosterior dp_posterior(const AtomBase& base, double alpha,
                         const std::vector<int>& atom_observations);

/// One draw of (theta, cell): theta ~ Dirichlet(params) via normalized gamma
/// variates, then cell ~ Categorical(theta). Pure given the engine state.
std::pair<Eigen::VectorXd, int> sample_dirichlet_multinomial(
    const Eigen::VectorXd& params, std::mt19937_64& rng);

/// All partitions of {0..atom_count-1}, generated from restricted growth
/// strings in a fixed order. Bell(6) = 203; atom_count <= 12.
std::vector<PartitionIndex> enumerate_partitions(int atom_count);

/// Dirichlet log density with respect to Lebesgue measure on the simplex
/// face (the first m-1 coordinates). theta must be strictly inside.
double dirichlet_logpdf(const Eigen::VectorXd& params,
                        const Eigen::VectorXd& theta);

/**
 * Exponential-family view of one categorical draw on m cells. The natural
 * parameter is unconstrained in R^m with log-partition logsumexp, so any
 * real vector normalizes; log of a probability vector recovers that pmf.
 * The conjugate prior is evaluated in mean coordinates: conj_logpdf(theta,
 * hyper) is the Dirichlet(gamma) density at the probability vector theta
 * (lambda is carried but inert, matching the one-parameter-family structure
 * of the update on gamma alone).
 */
ExpFamSpec<int> multinomial_expfam_spec(int cells);

/// Natural parameter (componentwise log) from a probability vector.
Eigen::VectorXd natural_from_mean(const Eigen::VectorXd& mean);

}  // namespace projlim
