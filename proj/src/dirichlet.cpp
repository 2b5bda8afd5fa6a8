#include "projlim/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "projlim/numeric.hpp"

namespace projlim {

AtomBase::AtomBase(Eigen::VectorXd weights) : g0(std::move(weights)) {
  if (g0.size() < 1) throw domain_error("base needs at least one atom");
  if (g0.size() > kMaxAtoms)
    throw capability_error("at most " + std::to_string(kMaxAtoms) + " atoms");
  if ((g0.array() < 0).any())
    throw domain_error("base weights must be nonnegative");
  if (std::abs(g0.sum() - 1.0) > 1e-12)
    throw domain_error("base weights must sum to 1 within 1e-12");
}

PartitionIndex::PartitionIndex(std::vector<std::vector<int>> cells_,
                               int atom_count)
    : cells(std::move(cells_)), atom_count_(atom_count) {
  if (atom_count < 1 || atom_count > kMaxAtoms)
    throw capability_error("atom count out of range");
  std::vector<char> seen(atom_count, 0);
  for (auto& cell : cells) {
    if (cell.empty()) throw domain_error("cells must be nonempty");
    std::sort(cell.begin(), cell.end());
    for (int a : cell) {
      if (a < 0 || a >= atom_count || seen[a])
        throw domain_error("cells must disjointly cover 0..M-1");
      seen[a] = 1;
    }
  }
  for (char s : seen)
    if (!s) throw domain_error("cells must cover every atom");
  std::sort(cells.begin(), cells.end());
}

int PartitionIndex::cell_of_atom(int atom) const {
  for (int c = 0; c < cell_count(); ++c)
    if (std::binary_search(cells[c].begin(), cells[c].end(), atom)) return c;
  throw domain_error("atom id out of range");
}

PartitionIndex singleton_partition(int atom_count) {
  std::vector<std::vector<int>> cells;
  for (int a = 0; a < atom_count; ++a) cells.push_back({a});
  return PartitionIndex(std::move(cells), atom_count);
}

PartitionIndex trivial_partition(int atom_count) {
  std::vector<int> all(atom_count);
  for (int a = 0; a < atom_count; ++a) all[a] = a;
  return PartitionIndex({all}, atom_count);
}

bool is_refinement(const PartitionIndex& coarse, const PartitionIndex& fine) {
  if (coarse.atom_count() != fine.atom_count()) return false;
  for (const auto& cell : fine.cells) {
    const int host = coarse.cell_of_atom(cell.front());
    for (int a : cell)
      if (coarse.cell_of_atom(a) != host) return false;
  }
  return true;
}

int project_cell(const PartitionIndex& coarse, const PartitionIndex& fine,
                 int fine_cell) {
  if (!is_refinement(coarse, fine))
    throw ordering_error("fine partition does not refine the coarse one");
  if (fine_cell < 0 || fine_cell >= fine.cell_count())
    throw domain_error("cell index out of range");
  return coarse.cell_of_atom(fine.cells[fine_cell].front());
}

Eigen::VectorXd project_simplex(const PartitionIndex& coarse,
                                const PartitionIndex& fine,
                                const Eigen::VectorXd& theta_fine) {
  if (!is_refinement(coarse, fine))
    throw ordering_error("fine partition does not refine the coarse one");
  if (theta_fine.size() != fine.cell_count())
    throw domain_error("theta has wrong length");
  if ((theta_fine.array() < 0).any() ||
      std::abs(theta_fine.sum() - 1.0) > 1e-12)
    throw domain_error("theta is not on the probability simplex");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(coarse.cell_count());
  for (int c = 0; c < fine.cell_count(); ++c)
    out(coarse.cell_of_atom(fine.cells[c].front())) += theta_fine(c);
  return out;
}

Eigen::VectorXd dirichlet_marginal(const AtomBase& base, double alpha,
                                   const PartitionIndex& partition) {
  if (!(alpha > 0)) throw domain_error("alpha must be positive");
  if (partition.atom_count() != base.atom_count())
    throw domain_error("partition and base disagree on the atom count");
  Eigen::VectorXd out(partition.cell_count());
  for (int c = 0; c < partition.cell_count(); ++c) {
    double mass = 0.0;
    for (int a : partition.cells[c]) mass += base.g0(a);
    if (!(mass > 0))
      throw domain_error("cell " + std::to_string(c) +
                         " has zero base mass; its parameter degenerates");
    out(c) = alpha * mass;
  }
  return out;
}

void validate_dirichlet_params(const Eigen::VectorXd& params) {
  if (params.size() < 1) throw domain_error("empty parameter vector");
  if ((params.array() <= 0).any())
    throw domain_error("parameters must be strictly positive");
}

DpPosterior dp_posterior(const AtomBase& base, double alpha,
                         const std::vector<int>& atom_observations) {
  if (!(alpha > 0)) throw domain_error("alpha must be positive");
  const int m = base.atom_count();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(m);
  for (int a : atom_observations) {
    if (a < 0 || a >= m) throw domain_error("atom id out of range");
    counts(a) += 1.0;
  }
  const double n = static_cast<double>(atom_observations.size());
  const Eigen::VectorXd unnormalized = alpha * base.g0 + counts;
  DpPosterior out;
  out.alpha = alpha + n;
  out.weights = n > 0
                    ? ((n / (alpha + n)) * (counts / n) +
                       (alpha / (alpha + n)) * base.g0)
                          .eval()
                    : base.g0;
  const double rep_gap =
      (unnormalized - out.alpha * out.weights).cwiseAbs().maxCoeff();
  if (rep_gap > 1e-12)
    throw numeric_error("posterior representations disagree by " +
                        std::to_string(rep_gap));
  return out;
}

std::pair<Eigen::VectorXd, int> sample_dirichlet_multinomial(
    const Eigen::VectorXd& params, std::mt19937_64& rng) {
  validate_dirichlet_params(params);
  Eigen::VectorXd theta(params.size());
  for (int c = 0; c < params.size(); ++c) {
    std::gamma_distribution<double> gamma(params(c), 1.0);
    theta(c) = gamma(rng);
  }
  const double total = theta.sum();
  if (!(total > 0)) throw numeric_error("all gamma variates are zero");
  theta /= total;
  std::discrete_distribution<int> pick(theta.data(),
                                       theta.data() + theta.size());
  return {theta, pick(rng)};
}

std::vector<PartitionIndex> enumerate_partitions(int atom_count) {
  if (atom_count < 1 || atom_count > 12)
    throw capability_error("partition enumeration supports 1..12 atoms");
  // Restricted growth strings: s[0] = 0, s[i] <= 1 + max(s[0..i-1]).
  std::vector<PartitionIndex> out;
  std::vector<int> s(atom_count, 0);
  while (true) {
    const int blocks = *std::max_element(s.begin(), s.end()) + 1;
    std::vector<std::vector<int>> cells(blocks);
    for (int a = 0; a < atom_count; ++a) cells[s[a]].push_back(a);
    out.push_back(PartitionIndex(std::move(cells), atom_count));
    int i = atom_count - 1;
    for (; i > 0; --i) {
      const int cap = 1 + *std::max_element(s.begin(), s.begin() + i);
      if (s[i] < cap) break;
      s[i] = 0;
    }
    if (i == 0) break;
    ++s[i];
    std::fill(s.begin() + i + 1, s.end(), 0);
  }
  return out;
}

double dirichlet_logpdf(const Eigen::VectorXd& params,
                        const Eigen::VectorXd& theta) {
  validate_dirichlet_params(params);
  if (theta.size() != params.size()) throw domain_error("dimension mismatch");
  if ((theta.array() <= 0).any() || std::abs(theta.sum() - 1.0) > 1e-9)
    throw domain_error("theta must lie strictly inside the simplex");
  double val = std::lgamma(params.sum());
  for (int c = 0; c < params.size(); ++c) {
    val -= std::lgamma(params(c));
    val += (params(c) - 1.0) * std::log(theta(c));
  }
  return val;
}

Eigen::VectorXd natural_from_mean(const Eigen::VectorXd& mean) {
  if ((mean.array() <= 0).any())
    throw domain_error("mean parameters must be strictly positive");
  return mean.array().log();
}

ExpFamSpec<int> multinomial_expfam_spec(int cells) {
  if (cells < 2) throw domain_error("need at least two cells");
  if (cells > kMaxAtoms) throw capability_error("too many cells");
  ExpFamSpec<int> spec;
  spec.dim = cells;
  spec.suffstat = [cells](const int& x) {
    if (x < 0 || x >= cells) throw domain_error("cell id out of range");
    Eigen::VectorXd s = Eigen::VectorXd::Zero(cells);
    s(x) = 1.0;
    return s;
  };
  spec.log_base = [](const int&) { return 0.0; };
  spec.log_partition = [](const Eigen::VectorXd& theta) {
    return logsumexp(theta);
  };
  spec.enumerate_space = [cells]() {
    std::vector<int> xs(cells);
    for (int i = 0; i < cells; ++i) xs[i] = i;
    return xs;
  };
  spec.validate_hyper = [cells](const ConjugateHyper& h) {
    if (h.gamma.size() != cells)
      throw improper_prior_error("gamma has wrong length");
    if ((h.gamma.array() <= 0).any())
      throw improper_prior_error("gamma must be strictly positive");
  };
  spec.conj_logpdf = [](const Eigen::VectorXd& theta, const ConjugateHyper& h) {
    return dirichlet_logpdf(h.gamma, theta);
  };
  return spec;
}

}  // namespace projlim
