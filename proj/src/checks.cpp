#include "projlim/checks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "projlim/cayley.hpp"
#include "projlim/concentration.hpp"
#include "projlim/dirichlet.hpp"
#include "projlim/errors.hpp"
#include "projlim/gaussian.hpp"
#include "projlim/permutation.hpp"
#include "projlim/projective.hpp"
#include "projlim/rng.hpp"

namespace projlim {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sn_label(int n) { return "S" + std::to_string(n); }

std::string partition_label(const PartitionIndex& p) {
  std::string s = "{";
  for (std::size_t c = 0; c < p.cells.size(); ++c) {
    if (c) s += "|";
    for (std::size_t i = 0; i < p.cells[c].size(); ++i) {
      if (i) s += " ";
      s += std::to_string(p.cells[c][i]);
    }
  }
  return s + "}";
}

std::string coords_label(const std::vector<int>& coords) {
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(coords[i]);
  }
  return s + ")";
}

Eigen::VectorXd uniform_vector(int dim, double lo, double hi,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = u(rng);
  return v;
}

CayleyTheta random_cayley_theta(int n, std::mt19937_64& rng) {
  return CayleyTheta(uniform_vector(n - 1, -2.0, 2.0, rng));
}

Eigen::MatrixXd random_spd(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = nd(rng);
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  const Eigen::VectorXd evals = uniform_vector(dim, 0.3, 3.0, rng);
  Eigen::MatrixXd s = q * evals.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

GaussianMarginalParams random_gaussian_prior(int dim, std::mt19937_64& rng,
                                             bool diagonal) {
  GaussianMarginalParams p;
  p.coords.resize(dim);
  for (int i = 0; i < dim; ++i) p.coords[i] = i + 1;
  p.mean = uniform_vector(dim, -2.0, 2.0, rng);
  if (diagonal)
    p.cov = uniform_vector(dim, 0.3, 3.0, rng).asDiagonal();
  else
    p.cov = random_spd(dim, rng);
  return p;
}

Permutation project_steps(const Permutation& pi, int lo) {
  Permutation out = pi;
  for (int m = pi.size(); m > lo; --m) out = project_down(out);
  return out;
}

std::string one_line_key(const Permutation& pi) {
  std::string key;
  for (int v : pi.one_line()) {
    if (!key.empty()) key += ",";
    key += std::to_string(v);
  }
  return key;
}

// The tilted permutation family seen as one model per group size, wired into
// the generic marginalization checker. Parameter projection truncates to the
// leading coordinates; point projection deletes elements from the top.
MarginalModelFamily<int, Permutation, CayleyTheta> cayley_level_family() {
  MarginalModelFamily<int, Permutation, CayleyTheta> fam;
  fam.label = "cayley";
  fam.logpdf = [](const int& n, const Permutation& pi,
                  const CayleyTheta& theta) {
    if (pi.size() != n || theta.n() != n)
      throw domain_error("level mismatch in cayley family");
    return cayley_loglik(pi, theta);
  };
  fam.project_param = [](const int& lo, const int& hi, const CayleyTheta& t) {
    if (lo > hi || t.n() != hi)
      throw ordering_error("parameter projection needs lo <= hi");
    return CayleyTheta(Eigen::VectorXd(t.theta.head(lo - 1)));
  };
  fam.project_point = [](const int& lo, const int& hi, const Permutation& pi) {
    if (pi.size() != hi) throw domain_error("point lives at the wrong level");
    return project_steps(pi, lo);
  };
  fam.enumerate_points = [](const int& n) { return enumerate_sn(n); };
  fam.point_key = one_line_key;
  fam.index_label = sn_label;
  return fam;
}

// Categorical observation model across partition levels: the cell probability
// vector marginalizes by cellwise summation.
MarginalModelFamily<PartitionIndex, int, Eigen::VectorXd>
multinomial_level_family() {
  MarginalModelFamily<PartitionIndex, int, Eigen::VectorXd> fam;
  fam.label = "dirichlet";
  fam.logpdf = [](const PartitionIndex& p, const int& cell,
                  const Eigen::VectorXd& theta) {
    if (theta.size() != p.cell_count() || cell < 0 || cell >= p.cell_count())
      throw domain_error("cell outside partition");
    return std::log(theta(cell));
  };
  fam.project_param = [](const PartitionIndex& lo, const PartitionIndex& hi,
                         const Eigen::VectorXd& theta) {
    return project_simplex(lo, hi, theta);
  };
  fam.project_point = [](const PartitionIndex& lo, const PartitionIndex& hi,
                         const int& cell) { return project_cell(lo, hi, cell); };
  fam.enumerate_points = [](const PartitionIndex& p) {
    std::vector<int> cells(p.cell_count());
    for (int c = 0; c < p.cell_count(); ++c) cells[c] = c;
    return cells;
  };
  fam.point_key = [](const int& cell) { return std::to_string(cell); };
  fam.index_label = partition_label;
  return fam;
}

// ---------------------------------------------------------------------------
// Reusable check bodies. Criterion functions and run_check both call these;
// only the sizes differ.
// ---------------------------------------------------------------------------

ProjectivityReport check_encoding_bijection(int max_n) {
  long long mismatches = 0;
  long long total = 0;
  for (int n = 1; n <= max_n; ++n) {
    for (const Permutation& pi : enumerate_sn(n)) {
      ++total;
      if (!(decode(encode(pi)) == pi)) ++mismatches;
    }
    std::vector<int> k(n, 1);
    for (;;) {
      ++total;
      if (encode(decode(PermutationEncoding{k})).k != k) ++mismatches;
      int j = n - 1;
      while (j >= 0 && k[j] == j + 1) k[j--] = 1;
      if (j < 0) break;
      ++k[j];
    }
  }
  return make_report("cayley", "encoding-bijection",
                     "S1.." + sn_label(max_n), CheckMethod::exact_enumeration,
                     static_cast<double>(mismatches), 0.0,
                     std::to_string(total) + " round trips");
}

ProjectivityReport check_projection_equivalence(int max_lo) {
  long long mismatches = 0;
  long long total = 0;
  for (int lo = 1; lo <= max_lo; ++lo) {
    for (const Permutation& pi : enumerate_sn(lo + 1)) {
      ++total;
      if (!(project_down(pi) == project_down_cycle(pi))) ++mismatches;
    }
  }
  return make_report("cayley", "projection-equivalence",
                     "S2.." + sn_label(max_lo + 1) + " -> one level down",
                     CheckMethod::exact_enumeration,
                     static_cast<double>(mismatches), 0.0,
                     std::to_string(total) + " permutations");
}

ProjectivityReport check_likelihood_projectivity(int max_lo, int thetas,
                                                 std::uint64_t seed,
                                                 double tol) {
  const auto fam = cayley_level_family();
  auto rng = make_rng(derive_seed(seed, 301));
  double max_dev = 0.0;
  for (int lo = 1; lo <= max_lo; ++lo) {
    for (int t = 0; t < thetas; ++t) {
      const CayleyTheta theta = random_cayley_theta(lo + 1, rng);
      const auto rep =
          verify_marginal_projectivity_exact(fam, lo, lo + 1, theta, tol,
                                             "cayley");
      max_dev = std::max(max_dev, rep.max_deviation);
    }
  }
  return make_report("cayley", "likelihood-projectivity",
                     "S1<=S2 .. " + sn_label(max_lo) + "<=" +
                         sn_label(max_lo + 1),
                     CheckMethod::exact_enumeration, max_dev, tol,
                     std::to_string(thetas) + " theta per level", seed);
}

ProjectivityReport check_partition_function(int max_n, int thetas,
                                            std::uint64_t seed, double tol) {
  auto rng = make_rng(derive_seed(seed, 401));
  double max_rel = 0.0;
  for (int n = 2; n <= max_n; ++n) {
    const auto group = enumerate_sn(n);
    for (int t = 0; t < thetas; ++t) {
      const CayleyTheta theta = random_cayley_theta(n, rng);
      double brute = 0.0;
      for (const Permutation& pi : group) {
        const std::vector<int> w = suffstat_w(pi);
        double s = 0.0;
        for (int j = 2; j <= n; ++j) s += theta.coord(j) * w[j - 1];
        brute += std::exp(-s);
      }
      double prod = 1.0;
      for (int j = 2; j <= n; ++j)
        prod *= 1.0 + (j - 1) * std::exp(-theta.coord(j));
      max_rel = std::max(max_rel, std::abs(brute - prod) / prod);
    }
  }
  return make_report("cayley", "partition-function-factorization",
                     "S2.." + sn_label(max_n), CheckMethod::exact_enumeration,
                     max_rel, tol,
                     std::to_string(thetas) + " theta per level", seed,
                     "relative deviation of brute-force sum vs product form");
}

std::vector<ProjectivityReport> check_w_independence(int max_n, int thetas,
                                                     std::uint64_t seed,
                                                     double tol) {
  auto rng = make_rng(derive_seed(seed, 501));
  double max_dev = 0.0;
  for (int n = 2; n <= max_n; ++n) {
    for (int t = 0; t < thetas; ++t) {
      const CayleyTheta theta = random_cayley_theta(n, rng);
      const Eigen::VectorXd q = bernoulli_q(theta);
      std::map<std::vector<int>, double> joint;
      for (const auto& [pi, p] : brute_force_pmf(theta, n))
        joint[suffstat_w(pi)] += p;
      for (const auto& [w, mass] : joint) {
        double predicted = 1.0;
        for (int j = 2; j <= n; ++j)
          predicted *= w[j - 1] ? q(j - 2) : 1.0 - q(j - 2);
        max_dev = std::max(max_dev, std::abs(mass - predicted));
      }
    }
  }

  // At theta = 0 the model is uniform on S_n and P(W_j = 1) = (j-1)/j; both
  // sides scale to integers, so the comparison is exact counting.
  long long violations = 0;
  for (int n = 2; n <= max_n; ++n) {
    const auto group = enumerate_sn(n);
    std::vector<long long> count(n + 1, 0);
    for (const Permutation& pi : group) {
      const std::vector<int> w = suffstat_w(pi);
      for (int j = 2; j <= n; ++j) count[j] += w[j - 1];
    }
    const long long size = static_cast<long long>(group.size());
    for (int j = 2; j <= n; ++j)
      if (count[j] * j != size * (j - 1)) ++violations;
  }

  return {
      make_report("cayley", "w-joint-factorization", "S2.." + sn_label(max_n),
                  CheckMethod::exact_enumeration, max_dev, tol,
                  std::to_string(thetas) + " theta per level", seed,
                  "joint law of the move indicators vs product of marginals"),
      make_report("cayley", "w-uniform-marginals", "S2.." + sn_label(max_n),
                  CheckMethod::exact_enumeration,
                  static_cast<double>(violations), 0.0, "integer counts",
                  std::nullopt,
                  "at theta = 0, j * #{W_j = 1} must equal (j-1) * n!"),
  };
}

ProjectivityReport check_dirichlet_commute(int max_atoms, std::uint64_t seed,
                                           double tol) {
  auto rng = make_rng(derive_seed(seed, 601));
  double max_dev = 0.0;
  long long pairs = 0;
  for (int atoms = 2; atoms <= max_atoms; ++atoms) {
    Eigen::VectorXd w = uniform_vector(atoms, 0.2, 1.0, rng);
    const AtomBase base(w / w.sum());
    std::vector<std::vector<int>> datasets(3, std::vector<int>(8));
    std::uniform_int_distribution<int> atom_draw(0, atoms - 1);
    for (auto& d : datasets)
      for (int& a : d) a = atom_draw(rng);

    const auto partitions = enumerate_partitions(atoms);
    for (const PartitionIndex& fine : partitions) {
      for (const PartitionIndex& coarse : partitions) {
        if (!is_refinement(coarse, fine)) continue;
        ++pairs;
        for (const auto& data : datasets) {
          for (const double alpha : {0.5, 3.0}) {
            Eigen::VectorXd post_fine = dirichlet_marginal(base, alpha, fine);
            for (int a : data) post_fine(fine.cell_of_atom(a)) += 1.0;
            Eigen::VectorXd projected =
                Eigen::VectorXd::Zero(coarse.cell_count());
            for (int c = 0; c < fine.cell_count(); ++c)
              projected(project_cell(coarse, fine, c)) += post_fine(c);

            Eigen::VectorXd post_coarse =
                dirichlet_marginal(base, alpha, coarse);
            for (int a : data) post_coarse(coarse.cell_of_atom(a)) += 1.0;
            max_dev =
                std::max(max_dev, vector_deviation(projected, post_coarse));
          }
        }
      }
    }
  }
  return make_report("dirichlet", "posterior-commute",
                     "all refinement pairs, 2.." + std::to_string(max_atoms) +
                         " atoms",
                     CheckMethod::exact_enumeration, max_dev, tol,
                     std::to_string(pairs) + " pairs x 3 datasets x 2 alphas",
                     seed);
}

ProjectivityReport check_gaussian_oracle(int instances, int max_dim,
                                         std::uint64_t seed, double tol) {
  auto rng = make_rng(derive_seed(seed, 701));
  std::uniform_int_distribution<int> n_draw(1, 12);
  double max_dev = 0.0;
  double max_gap = 0.0;
  std::string conditioning;
  for (int i = 0; i < instances; ++i) {
    const int dim = 1 + i % max_dim;
    const GaussianMarginalParams prior =
        random_gaussian_prior(dim, rng, false);
    const int n = n_draw(rng);
    std::vector<Eigen::VectorXd> obs(n);
    Eigen::VectorXd xbar = Eigen::VectorXd::Zero(dim);
    for (auto& x : obs) {
      x = sample_gaussian(prior, rng);
      xbar += x;
    }
    xbar /= static_cast<double>(n);

    const GaussianMarginalParams post = gp_posterior_index(prior, obs);
    std::string note;
    const GaussianMarginalParams oracle =
        direct_bayes_oracle(prior, n, xbar, &note);
    if (!note.empty()) conditioning = note;
    max_dev = std::max(max_dev, vector_deviation(post.mean, oracle.mean));
    max_dev = std::max(
        max_dev, (post.cov - oracle.cov).cwiseAbs().maxCoeff());
    max_gap = std::max(max_gap, resolvent_scaling_gap(prior, n));
  }
  std::string note =
      "resolvent product Sigma (Sigma + I/n)^-1 equals n x posterior "
      "covariance up to " +
      format_double(max_gap) + "; the posterior applies the 1/n factor";
  if (!conditioning.empty()) note += "; " + conditioning;
  return make_report("gaussian", "posterior-oracle",
                     "dims 1.." + std::to_string(max_dim),
                     CheckMethod::exact_enumeration, max_dev, tol,
                     std::to_string(instances) + " random SPD instances", seed,
                     note);
}

ProjectivityReport check_gaussian_quadrature(double tol) {
  GaussianMarginalParams hi;
  hi.coords = {1, 2};
  hi.mean = Eigen::Vector2d(1.0, 2.0);
  hi.cov = (Eigen::Matrix2d() << 2.0, 1.0, 1.0, 3.0).finished();
  const GaussianMarginalParams lo = gaussian_project(hi, {1});

  const double sd0 = std::sqrt(hi.cov(0, 0)), sd1 = std::sqrt(hi.cov(1, 1));
  GridSpec grid;
  grid.lo = Eigen::Vector2d(hi.mean(0) - 4 * sd0, hi.mean(1) - 6 * sd1);
  grid.hi = Eigen::Vector2d(hi.mean(0) + 4 * sd0, hi.mean(1) + 6 * sd1);
  grid.nodes = {41, 400};
  return verify_marginal_projectivity_quadrature(
      [hi](const Eigen::VectorXd& x) { return gaussian_logpdf(hi, x); },
      [lo](const Eigen::VectorXd& x) { return gaussian_logpdf(lo, x); }, {0},
      grid, tol, "gaussian", "(1 2)<=(1)");
}

std::vector<ProjectivityReport> check_composition(const std::string& model,
                                                  std::uint64_t seed,
                                                  double gaussian_tol) {
  std::vector<ProjectivityReport> reports;
  auto rng = make_rng(derive_seed(seed, 901));

  if (model.empty() || model == "dirichlet") {
    const auto spec = multinomial_expfam_spec(3);
    ConjugateHyper h{1.0, Eigen::Vector3d(0.5, 0.25, 0.25)};
    const std::vector<int> a{0, 1, 2, 0}, b{2, 2, 1};
    const double dev =
        composition_deviation(make_posterior_index(spec), h, a, b);
    reports.push_back(make_report(
        "dirichlet", "posterior-composition", "4 obs then 3 obs",
        CheckMethod::exact_enumeration, dev, 0.0,
        "dyadic hyper, integer statistic totals"));
  }
  if (model.empty() || model == "cayley") {
    const auto spec = cayley_expfam_spec(4);
    ConjugateHyper h{1.0, Eigen::Vector3d(-0.5, -0.25, -0.5)};
    std::vector<Permutation> a, b;
    for (int i = 0; i < 3; ++i)
      a.push_back(sample_cayley(CayleyTheta::zero(4), 4, rng));
    for (int i = 0; i < 2; ++i)
      b.push_back(sample_cayley(CayleyTheta::zero(4), 4, rng));
    const double dev =
        composition_deviation(make_posterior_index(spec), h, a, b);
    reports.push_back(make_report(
        "cayley", "posterior-composition", "3 obs then 2 obs",
        CheckMethod::exact_enumeration, dev, 0.0,
        "dyadic hyper, integer statistic totals", seed));
  }
  if (model.empty() || model == "gaussian") {
    const auto spec = whitenoise_expfam_spec(3);
    ConjugateHyper h{2.0, uniform_vector(3, -1.0, 1.0, rng)};
    std::normal_distribution<double> nd(0.0, 1.0);
    auto draw = [&] {
      Eigen::VectorXd x(3);
      for (int i = 0; i < 3; ++i) x(i) = nd(rng);
      return x;
    };
    const std::vector<Eigen::VectorXd> a{draw(), draw()}, b{draw(), draw()};
    const double dev =
        composition_deviation(make_posterior_index(spec), h, a, b);
    reports.push_back(make_report("gaussian", "posterior-composition",
                                  "2 obs then 2 obs",
                                  CheckMethod::exact_enumeration, dev,
                                  gaussian_tol, "unit-noise natural form",
                                  seed));

    // Same law through the covariance-form update: conditioning on two
    // batches sequentially must match conditioning on all four at once.
    const GaussianMarginalParams prior = random_gaussian_prior(4, rng, false);
    std::vector<Eigen::VectorXd> batch_a, batch_b, all;
    for (int i = 0; i < 2; ++i) batch_a.push_back(sample_gaussian(prior, rng));
    for (int i = 0; i < 2; ++i) batch_b.push_back(sample_gaussian(prior, rng));
    all = batch_a;
    all.insert(all.end(), batch_b.begin(), batch_b.end());
    const GaussianMarginalParams chained =
        gp_posterior_index(gp_posterior_index(prior, batch_a), batch_b);
    const GaussianMarginalParams batch = gp_posterior_index(prior, all);
    double dev2 = vector_deviation(chained.mean, batch.mean);
    dev2 = std::max(dev2, (chained.cov - batch.cov).cwiseAbs().maxCoeff());
    reports.push_back(make_report("gaussian", "posterior-composition",
                                  "covariance form, 2+2 obs",
                                  CheckMethod::exact_enumeration, dev2,
                                  gaussian_tol, "dim 4 random SPD prior",
                                  seed));
  }
  return reports;
}

std::vector<ProjectivityReport> check_cayley_sampler(int n, long long draws,
                                                     std::uint64_t seed,
                                                     double z_tol) {
  std::vector<ProjectivityReport> reports;
  auto theta_rng = make_rng(derive_seed(seed, 1001));
  for (int which = 0; which < 3; ++which) {
    const CayleyTheta theta = which == 0 ? CayleyTheta::zero(n)
                                         : random_cayley_theta(n, theta_rng);
    const auto table = brute_force_pmf(theta, n);
    std::map<std::string, int> cell_of;
    for (std::size_t c = 0; c < table.size(); ++c)
      cell_of[one_line_key(table[c].first)] = static_cast<int>(c);

    auto rng = make_rng(derive_seed(seed, 1010 + which));
    std::vector<long long> count(table.size(), 0);
    for (long long d = 0; d < draws; ++d)
      ++count[cell_of.at(one_line_key(sample_cayley(theta, n, rng)))];

    double max_z = 0.0;
    for (std::size_t c = 0; c < table.size(); ++c) {
      const double p = table[c].second;
      const double se = std::sqrt(static_cast<double>(draws) * p * (1.0 - p));
      max_z = std::max(
          max_z, std::abs(static_cast<double>(count[c]) -
                          static_cast<double>(draws) * p) / se);
    }
    reports.push_back(make_report(
        "cayley", "sampler-vs-oracle",
        sn_label(n) + (which == 0 ? ", theta = 0"
                                  : ", random theta #" + std::to_string(which)),
        CheckMethod::monte_carlo, max_z, z_tol,
        std::to_string(draws) + " draws, " + std::to_string(table.size()) +
            " cells",
        seed, "max |count - N p| / binomial SE over cells"));
  }
  return reports;
}

std::vector<ProjectivityReport> check_concentration_dichotomy(
    std::uint64_t seed) {
  std::vector<ProjectivityReport> reports;

  const TailFamily steep{3.0, 0.0};
  const auto conv = concentration_predicate(CayleyTailQuery{steep, 10000});
  const double increment = steep.q_at(10000);
  reports.push_back(make_report(
      "cayley", "tail-summable", "theta_j = 3 log j",
      CheckMethod::exact_enumeration,
      conv.verdict == true ? increment : 1.0, 1e-6,
      "partial sums to j = 10^4", std::nullopt,
      "deviation is the partial-sum increment at the last index; " +
          conv.reason));

  const TailFamily flat{2.0, 0.0};
  const auto div = concentration_predicate(CayleyTailQuery{flat, 1000});
  const double partial = div.series.back().second;
  const bool diverged = div.verdict == false && partial > 5.0;
  reports.push_back(make_report(
      "cayley", "tail-divergent", "theta_j = 2 log j",
      CheckMethod::exact_enumeration, diverged ? 0.0 : 1.0, 0.0,
      "partial sums to j = 10^3", std::nullopt,
      "partial sum " + format_double(partial) + " must exceed 5; " +
          div.reason));

  // The sampler must reproduce the analytic expected number of non-trivial
  // insertions at depth 200 for both tail regimes.
  int which = 0;
  for (const TailFamily& fam : {steep, flat}) {
    const int depth = 200;
    Eigen::VectorXd theta(depth - 1);
    double expected = 0.0, variance = 0.0;
    for (int j = 2; j <= depth; ++j) {
      theta(j - 2) = fam.theta_at(j);
      const double q = fam.q_at(j);
      expected += q;
      variance += q * (1.0 - q);
    }
    const long long draws = 10000;
    auto rng = make_rng(derive_seed(seed, 1101 + which));
    double total = 0.0;
    const CayleyTheta ct{theta};
    for (long long d = 0; d < draws; ++d) {
      const Permutation pi = sample_cayley(ct, depth, rng);
      total += depth - pi.cycle_count();
    }
    const double mean = total / static_cast<double>(draws);
    const double se = std::sqrt(variance / static_cast<double>(draws));
    reports.push_back(make_report(
        "cayley", "sampler-total-moves",
        "theta_j = " + format_double(fam.c) + " log j, depth 200",
        CheckMethod::monte_carlo, std::abs(mean - expected) / se, 3.0,
        std::to_string(draws) + " draws", seed,
        "empirical mean " + format_double(mean) + " vs analytic " +
            format_double(expected)));
    ++which;
  }
  return reports;
}

std::vector<ProjectivityReport> check_sufficiency(const std::string& model,
                                                  std::uint64_t seed,
                                                  double gaussian_tol) {
  std::vector<ProjectivityReport> reports;
  auto rng = make_rng(derive_seed(seed, 1201));

  if (model.empty() || model == "cayley") {
    double max_dev = 0.0;
    for (int n = 2; n <= 6; ++n) {
      const auto group = enumerate_sn(n);
      for (int t = 0; t < 20; ++t) {
        const CayleyTheta theta = random_cayley_theta(n, rng);
        std::map<std::vector<int>, double> ref;
        for (const Permutation& pi : group) {
          const double ll = cayley_loglik(pi, theta);
          auto [it, fresh] = ref.emplace(suffstat_w(pi), ll);
          if (!fresh) max_dev = std::max(max_dev, std::abs(ll - it->second));
        }
      }
    }
    reports.push_back(make_report(
        "cayley", "sufficiency-factorization", "S2..S6",
        CheckMethod::exact_enumeration, max_dev, 0.0, "20 theta per level",
        seed, "equal move indicators force bitwise-equal log likelihood"));
  }
  if (model.empty() || model == "dirichlet") {
    Eigen::VectorXd w(4);
    w << 0.4, 0.3, 0.2, 0.1;
    const AtomBase base(w);
    const std::vector<int> data{0, 1, 1, 2, 0, 3, 2};
    std::vector<int> shuffled = data;
    auto shuffle_rng = make_rng(derive_seed(seed, 1202));
    std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
    const DpPosterior p1 = dp_posterior(base, 1.5, data);
    const DpPosterior p2 = dp_posterior(base, 1.5, shuffled);
    const double dev = std::max(std::abs(p1.alpha - p2.alpha),
                                vector_deviation(p1.weights, p2.weights));
    reports.push_back(make_report(
        "dirichlet", "sufficiency-factorization", "4 atoms, 7 obs",
        CheckMethod::exact_enumeration, dev, 0.0,
        "same atom counts in two orders", seed,
        "posterior depends on data only through the count vector"));
  }
  if (model.empty() || model == "gaussian") {
    const GaussianMarginalParams prior = random_gaussian_prior(3, rng, false);
    const Eigen::Vector3d v(1.0, 2.0, 0.5), u(-1.0, 0.5, 2.0);
    const Eigen::Vector3d mid = 0.5 * (v + u);
    const Eigen::Vector3d delta(0.3, -0.2, 0.7);
    const std::vector<Eigen::VectorXd> first{v, u};
    const std::vector<Eigen::VectorXd> second{mid + delta, mid - delta};
    const GaussianMarginalParams pa = gp_posterior_index(prior, first);
    const GaussianMarginalParams pb = gp_posterior_index(prior, second);
    double dev = vector_deviation(pa.mean, pb.mean);
    dev = std::max(dev, (pa.cov - pb.cov).cwiseAbs().maxCoeff());
    reports.push_back(make_report(
        "gaussian", "sufficiency-factorization", "dim 3, n = 2",
        CheckMethod::exact_enumeration, dev, gaussian_tol,
        "two datasets sharing (n, sample mean)", seed,
        "posterior depends on data only through (n, sample mean)"));
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Model-specific extras used by run_check only.
// ---------------------------------------------------------------------------

ProjectivityReport check_cayley_coherence(int top) {
  ProjectorFamily<int, Permutation> fam;
  fam.label = "cayley";
  fam.leq = [](const int& a, const int& b) { return a <= b; };
  fam.project = [](const int& lo, const int& hi, const Permutation& pi) {
    if (pi.size() != hi) throw domain_error("point at the wrong level");
    return project_steps(pi, lo);
  };
  fam.point_deviation = [](const Permutation& a, const Permutation& b) {
    return a == b ? 0.0 : 1.0;
  };
  fam.index_label = sn_label;
  const int lo = std::max(1, top - 2);
  std::vector<std::tuple<int, int, int>> triples{{lo, top - 1, top}};
  return check_projector_coherence<int, Permutation>(
      fam, triples, [](const int& n) { return enumerate_sn(n); }, "cayley");
}

ProjectivityReport check_partition_coherence(int atoms, std::uint64_t seed) {
  ProjectorFamily<PartitionIndex, Eigen::VectorXd> fam;
  fam.label = "dirichlet";
  fam.leq = [](const PartitionIndex& a, const PartitionIndex& b) {
    return is_refinement(a, b);
  };
  fam.project = [](const PartitionIndex& lo, const PartitionIndex& hi,
                   const Eigen::VectorXd& theta) {
    return project_simplex(lo, hi, theta);
  };
  fam.point_deviation = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    // Regrouped sums, so only FP associativity separates the two routes.
    return a.size() == b.size() ? vector_deviation(a, b) : 1.0;
  };
  fam.index_label = partition_label;

  std::vector<std::tuple<PartitionIndex, PartitionIndex, PartitionIndex>>
      triples;
  const auto partitions = enumerate_partitions(atoms);
  for (const auto& lo : partitions)
    for (const auto& mid : partitions)
      for (const auto& hi : partitions)
        if (is_refinement(lo, mid) && is_refinement(mid, hi))
          triples.emplace_back(lo, mid, hi);

  auto points_at = [seed](const PartitionIndex& p) {
    auto rng = make_rng(derive_seed(seed, 1300 + p.cell_count()));
    std::vector<Eigen::VectorXd> points;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p.cell_count());
    for (int i = 0; i < 5; ++i)
      points.push_back(sample_dirichlet_multinomial(ones, rng).first);
    return points;
  };
  auto rep = check_projector_coherence<PartitionIndex, Eigen::VectorXd>(
      fam, triples, points_at, "dirichlet", 1e-12);
  rep.seed = seed;
  return rep;
}

ProjectivityReport check_coords_coherence(int dim, std::uint64_t seed) {
  using Coords = std::vector<int>;
  ProjectorFamily<Coords, Eigen::VectorXd> fam;
  fam.label = "gaussian";
  fam.leq = [](const Coords& a, const Coords& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  fam.project = [](const Coords& lo, const Coords& hi,
                   const Eigen::VectorXd& x) {
    Eigen::VectorXd out(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const auto it = std::find(hi.begin(), hi.end(), lo[i]);
      if (it == hi.end()) throw ordering_error("coordinate set not nested");
      out(i) = x(it - hi.begin());
    }
    return out;
  };
  fam.point_deviation = vector_deviation;
  fam.index_label = coords_label;

  Coords full(dim);
  for (int i = 0; i < dim; ++i) full[i] = i + 1;
  Coords mid, lo;
  for (int i = 1; i <= dim; i += 2) mid.push_back(i);
  for (std::size_t i = 0; i < mid.size(); i += 2) lo.push_back(mid[i]);
  std::vector<std::tuple<Coords, Coords, Coords>> triples{{lo, mid, full}};

  auto points_at = [seed](const Coords& c) {
    auto rng = make_rng(derive_seed(seed, 1400 + c.size()));
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < 5; ++i)
      points.push_back(
          uniform_vector(static_cast<int>(c.size()), -3.0, 3.0, rng));
    return points;
  };
  auto rep = check_projector_coherence<Coords, Eigen::VectorXd>(
      fam, triples, points_at, "gaussian");
  rep.seed = seed;
  return rep;
}

ProjectivityReport check_cayley_w_map(int hi) {
  using Vec = Eigen::VectorXd;
  auto to_vec = [](const std::vector<int>& w) {
    Vec v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) v(i) = w[i];
    return v;
  };
  const std::function<Vec(const Permutation&)> w_hi =
      [to_vec](const Permutation& pi) { return to_vec(suffstat_w(pi)); };
  const std::function<Vec(const Permutation&)> w_lo = w_hi;
  const std::function<Permutation(const Permutation&)> drop =
      [](const Permutation& pi) { return project_down(pi); };
  const std::function<Vec(const Vec&)> head = [](const Vec& v) {
    return Vec(v.head(v.size() - 1));
  };
  const std::function<double(const Vec&, const Vec&)> dev = vector_deviation;
  return verify_map_projectivity<Permutation, Permutation, Vec, Vec>(
      w_hi, w_lo, drop, head, dev, enumerate_sn(hi), 0.0, "cayley",
      sn_label(hi - 1) + "<=" + sn_label(hi) + " move indicators");
}

ProjectivityReport check_dirichlet_count_map(int atoms, std::uint64_t seed) {
  using Data = std::vector<int>;
  using Vec = Eigen::VectorXd;
  const PartitionIndex fine = singleton_partition(atoms);
  PartitionIndex coarse({{0, 1}, {2, atoms - 1}}, atoms);
  if (atoms > 3) {
    std::vector<std::vector<int>> cells{{0, 1}};
    std::vector<int> rest;
    for (int a = 2; a < atoms; ++a) rest.push_back(a);
    cells.push_back(rest);
    coarse = PartitionIndex(cells, atoms);
  }

  auto counts = [](const PartitionIndex& p, const Data& d) {
    Vec c = Vec::Zero(p.cell_count());
    for (int a : d) c(p.cell_of_atom(a)) += 1.0;
    return c;
  };
  const std::function<Vec(const Data&)> w_hi =
      [&, fine](const Data& d) { return counts(fine, d); };
  const std::function<Vec(const Data&)> w_lo =
      [&, coarse](const Data& d) { return counts(coarse, d); };
  const std::function<Data(const Data&)> ident = [](const Data& d) {
    return d;
  };
  const std::function<Vec(const Vec&)> aggregate =
      [coarse, fine](const Vec& c) {
        Vec out = Vec::Zero(coarse.cell_count());
        for (int i = 0; i < c.size(); ++i)
          out(project_cell(coarse, fine, i)) += c(i);
        return out;
      };
  const std::function<double(const Vec&, const Vec&)> dev = vector_deviation;

  auto rng = make_rng(derive_seed(seed, 1501));
  std::uniform_int_distribution<int> atom_draw(0, atoms - 1);
  std::vector<Data> datasets(10, Data(12));
  for (auto& d : datasets)
    for (int& a : d) a = atom_draw(rng);
  auto rep = verify_map_projectivity<Data, Data, Vec, Vec>(
      w_hi, w_lo, ident, aggregate, dev, datasets, 0.0, "dirichlet",
      partition_label(coarse) + "<=" + partition_label(fine) + " counts");
  rep.seed = seed;
  return rep;
}

ProjectivityReport check_gaussian_stat_map(int dim, std::uint64_t seed) {
  using Data = std::vector<Eigen::VectorXd>;
  using Vec = Eigen::VectorXd;
  std::vector<int> keep;
  for (int i = 1; i <= dim; i += 2) keep.push_back(i);

  const std::function<Vec(const Data&)> sum_hi = [dim](const Data& d) {
    Vec s = Vec::Zero(dim);
    for (const auto& x : d) s += x;
    return s;
  };
  const std::function<Vec(const Data&)> sum_lo = [&keep](const Data& d) {
    Vec s = Vec::Zero(keep.size());
    for (const auto& x : d) s += x;
    return s;
  };
  const std::function<Data(const Data&)> drop = [&keep](const Data& d) {
    Data out;
    for (const auto& x : d) {
      Vec y(keep.size());
      for (std::size_t i = 0; i < keep.size(); ++i) y(i) = x(keep[i] - 1);
      out.push_back(y);
    }
    return out;
  };
  const std::function<Vec(const Vec&)> subset = [&keep](const Vec& s) {
    Vec out(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) out(i) = s(keep[i] - 1);
    return out;
  };
  const std::function<double(const Vec&, const Vec&)> dev = vector_deviation;

  auto rng = make_rng(derive_seed(seed, 1601));
  std::vector<Data> datasets(5, Data(6));
  for (auto& d : datasets)
    for (auto& x : d) x = uniform_vector(dim, -2.0, 2.0, rng);
  auto rep = verify_map_projectivity<Data, Data, Vec, Vec>(
      sum_hi, sum_lo, drop, subset, dev, datasets, 0.0, "gaussian",
      coords_label(keep) + " statistic totals");
  rep.seed = seed;
  return rep;
}

ProjectivityReport check_dirichlet_marginal_exact(int atoms,
                                                  std::uint64_t seed,
                                                  double tol) {
  const auto fam = multinomial_level_family();
  auto rng = make_rng(derive_seed(seed, 1701));
  const auto partitions = enumerate_partitions(atoms);
  const PartitionIndex fine = singleton_partition(atoms);
  double max_dev = 0.0;
  long long pairs = 0;
  for (const auto& coarse : partitions) {
    if (!is_refinement(coarse, fine)) continue;
    ++pairs;
    for (int t = 0; t < 3; ++t) {
      const Eigen::VectorXd theta =
          sample_dirichlet_multinomial(Eigen::VectorXd::Ones(atoms), rng)
              .first;
      const auto rep = verify_marginal_projectivity_exact(
          fam, coarse, fine, theta, tol, "dirichlet");
      max_dev = std::max(max_dev, rep.max_deviation);
    }
  }
  return make_report("dirichlet", "marginal-projectivity",
                     "all coarsenings of " + std::to_string(atoms) +
                         " singleton cells",
                     CheckMethod::exact_enumeration, max_dev, tol,
                     std::to_string(pairs) + " pairs x 3 theta", seed);
}

ProjectivityReport check_dirichlet_moments(int atoms, std::uint64_t seed,
                                           double tol) {
  auto rng = make_rng(derive_seed(seed, 1801));
  Eigen::VectorXd w = uniform_vector(atoms, 0.2, 1.0, rng);
  const AtomBase base(w / w.sum());
  const double alpha = 2.5;
  const PartitionIndex fine = singleton_partition(atoms);
  const Eigen::VectorXd af = dirichlet_marginal(base, alpha, fine);
  const double a0 = af.sum();

  double max_dev = 0.0;
  for (const auto& coarse : enumerate_partitions(atoms)) {
    const Eigen::VectorXd ac = dirichlet_marginal(base, alpha, coarse);
    for (int c = 0; c < coarse.cell_count(); ++c) {
      // First and second moments of the aggregated coordinate, once from the
      // fine-level moment formulas and once from the coarse parameters.
      double first = 0.0, second = 0.0;
      for (int i = 0; i < atoms; ++i) {
        if (project_cell(coarse, fine, i) != c) continue;
        first += af(i) / a0;
        for (int j = 0; j < atoms; ++j) {
          if (project_cell(coarse, fine, j) != c) continue;
          second += i == j ? af(i) * (af(i) + 1.0) / (a0 * (a0 + 1.0))
                           : af(i) * af(j) / (a0 * (a0 + 1.0));
        }
      }
      max_dev = std::max(max_dev, std::abs(first - ac(c) / a0));
      max_dev = std::max(
          max_dev,
          std::abs(second - ac(c) * (ac(c) + 1.0) / (a0 * (a0 + 1.0))));
    }
  }
  return make_report("dirichlet", "moment-aggregation",
                     std::to_string(atoms) + " atoms, all coarsenings",
                     CheckMethod::exact_enumeration, max_dev, tol,
                     "first and second moments", seed);
}

ProjectivityReport check_gaussian_param_projection(int dim) {
  const CovarianceSpec cov = squared_exp_cov(1.3, 2.0, std::nullopt);
  const auto mean_rule = [](int i) { return 0.1 * i; };
  std::vector<int> full, sub;
  for (int i = 1; i <= dim; ++i) full.push_back(i);
  for (int i = 1; i <= dim; i += 2) sub.push_back(i);

  const GaussianMarginalParams big = marginal_from_spec(cov, mean_rule, full);
  const GaussianMarginalParams projected = gaussian_project(big, sub);
  const GaussianMarginalParams direct = marginal_from_spec(cov, mean_rule, sub);
  double dev = vector_deviation(projected.mean, direct.mean);
  dev = std::max(dev, (projected.cov - direct.cov).cwiseAbs().maxCoeff());
  return make_report("gaussian", "parameter-projection",
                     coords_label(sub) + "<=" + coords_label(full),
                     CheckMethod::exact_enumeration, dev, 0.0,
                     "squared-exponential entries",
                     std::nullopt,
                     "row/column restriction vs direct construction");
}

ProjectivityReport check_gaussian_commute(int dim, int keep, int instances,
                                          std::uint64_t seed, double tol) {
  auto rng = make_rng(derive_seed(seed, 1901));
  std::vector<int> kept;
  for (int i = 1; i <= keep; ++i) kept.push_back(i);
  double max_dev = 0.0;
  for (int i = 0; i < instances; ++i) {
    const GaussianMarginalParams prior = random_gaussian_prior(dim, rng, true);
    std::vector<Eigen::VectorXd> obs;
    for (int k = 0; k < 3; ++k) obs.push_back(sample_gaussian(prior, rng));

    const GaussianMarginalParams through_post =
        gaussian_project(gp_posterior_index(prior, obs), kept);

    const GaussianMarginalParams prior_lo = gaussian_project(prior, kept);
    std::vector<Eigen::VectorXd> obs_lo;
    for (const auto& x : obs) obs_lo.push_back(Eigen::VectorXd(x.head(keep)));
    const GaussianMarginalParams through_proj =
        gp_posterior_index(prior_lo, obs_lo);

    max_dev =
        std::max(max_dev, vector_deviation(through_post.mean,
                                           through_proj.mean));
    max_dev = std::max(
        max_dev,
        (through_post.cov - through_proj.cov).cwiseAbs().maxCoeff());
  }
  return make_report(
      "gaussian", "posterior-commute",
      "dim " + std::to_string(keep) + " <= dim " + std::to_string(dim),
      CheckMethod::exact_enumeration, max_dev, tol,
      std::to_string(instances) + " diagonal-covariance priors, 3 obs", seed,
      "commutation needs zero prior cross-covariance between kept and "
      "dropped coordinates, hence diagonal instances");
}

ProjectivityReport check_cayley_posterior_commute(int lo, int hi,
                                                  std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 2001));
  ConjugateHyper h_hi{1.0, Eigen::VectorXd::Constant(hi - 1, -0.5)};
  ConjugateHyper h_lo{1.0, Eigen::VectorXd::Constant(lo - 1, -0.5)};
  double max_dev = 0.0;
  for (int s = 0; s < 10; ++s) {
    std::vector<Permutation> obs, obs_lo;
    for (int i = 0; i < 6; ++i)
      obs.push_back(sample_cayley(CayleyTheta::zero(hi), hi, rng));
    for (const auto& pi : obs) obs_lo.push_back(project_steps(pi, lo));

    const ConjugateHyper post_hi = cayley_posterior(h_hi, obs);
    const ConjugateHyper projected{post_hi.lambda,
                                   Eigen::VectorXd(post_hi.gamma.head(lo - 1))};
    const ConjugateHyper post_lo = cayley_posterior(h_lo, obs_lo);
    max_dev = std::max(max_dev, hyper_deviation(projected, post_lo));
  }
  return make_report("cayley", "posterior-commute",
                     sn_label(lo) + "<=" + sn_label(hi),
                     CheckMethod::exact_enumeration, max_dev, 0.0,
                     "10 datasets of 6 obs", seed,
                     "move totals project coordinatewise, so the update "
                     "commutes bitwise");
}

std::vector<ProjectivityReport> check_concentration_gaussian() {
  std::vector<ProjectivityReport> reports;
  const double pi_sq_over_6 = 1.6449340668482264;
  const auto summable =
      concentration_predicate(GpTraceQuery{diag_power_cov(2.0, pi_sq_over_6),
                                           10000});
  reports.push_back(make_report(
      "gaussian", "trace-summable", "diag j^-2",
      CheckMethod::exact_enumeration, summable.verdict == true ? 0.0 : 1.0,
      0.0, "partial trace to 10^4", std::nullopt, summable.reason));

  const auto divergent =
      concentration_predicate(GpTraceQuery{identity_cov(), 10000});
  reports.push_back(make_report(
      "gaussian", "trace-divergent", "identity",
      CheckMethod::exact_enumeration, divergent.verdict == false ? 0.0 : 1.0,
      0.0, "partial trace to 10^4", std::nullopt, divergent.reason));
  return reports;
}

ProjectivityReport check_concentration_prefix() {
  const auto rep = concentration_predicate(
      CayleyPrefixQuery{Eigen::VectorXd::Constant(9, 1.0)});
  return make_report("cayley", "prefix-no-verdict", "theta prefix, 10 coords",
                     CheckMethod::exact_enumeration,
                     rep.verdict.has_value() ? 1.0 : 0.0, 0.0, "", std::nullopt,
                     rep.reason);
}

ProjectivityReport check_concentration_dp() {
  Eigen::VectorXd w(3);
  w << 0.5, 0.25, 0.25;
  const auto rep = concentration_predicate(DpFiniteQuery{AtomBase(w)});
  return make_report("dirichlet", "base-measure-countable", "3 atoms",
                     CheckMethod::exact_enumeration,
                     rep.verdict == true ? 0.0 : 1.0, 0.0, "", std::nullopt,
                     rep.reason);
}

std::vector<ProjectivityReport> check_dirichlet_sampler(std::uint64_t seed) {
  Eigen::VectorXd w(4);
  w << 0.4, 0.3, 0.2, 0.1;
  const AtomBase base(w);
  const Eigen::VectorXd params =
      dirichlet_marginal(base, 2.0, singleton_partition(4));
  const double a0 = params.sum();

  const long long draws = 200000;
  auto rng = make_rng(derive_seed(seed, 2101));
  Eigen::VectorXd first = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd second = Eigen::VectorXd::Zero(4);
  for (long long d = 0; d < draws; ++d) {
    const Eigen::VectorXd theta =
        sample_dirichlet_multinomial(params, rng).first;
    first += theta;
    second += theta.cwiseProduct(theta);
  }
  first /= static_cast<double>(draws);
  second /= static_cast<double>(draws);

  double z_mean = 0.0, z_second = 0.0;
  for (int c = 0; c < 4; ++c) {
    const double m1 = params(c) / a0;
    const double m2 = params(c) * (params(c) + 1.0) / (a0 * (a0 + 1.0));
    const double var1 = m2 - m1 * m1;
    z_mean = std::max(z_mean, std::abs(first(c) - m1) /
                                  std::sqrt(var1 / draws));
    // theta^2 lies in [0, 1], so Var(theta^2) <= m2 (1 - m2). The bound
    // inflates the SE, understating z; the gate stays conservative.
    const double var2 = m2 * (1.0 - m2);
    z_second = std::max(z_second, std::abs(second(c) - m2) /
                                      std::sqrt(var2 / draws));
  }
  return {
      make_report("dirichlet", "sampler-vs-oracle", "4 atoms, first moments",
                  CheckMethod::monte_carlo, z_mean, 3.0,
                  std::to_string(draws) + " draws", seed,
                  "empirical mean vs alpha_c / alpha_0"),
      make_report("dirichlet", "sampler-vs-oracle", "4 atoms, second moments",
                  CheckMethod::monte_carlo, z_second, 3.0,
                  std::to_string(draws) + " draws", seed,
                  "conservative variance bound, so z is understated"),
  };
}

ProjectivityReport check_gaussian_sampler(std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 2201));
  const GaussianMarginalParams params = random_gaussian_prior(3, rng, false);
  const long long draws = 200000;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(3);
  for (long long d = 0; d < draws; ++d) total += sample_gaussian(params, rng);
  const Eigen::VectorXd mean = total / static_cast<double>(draws);
  double z = 0.0;
  for (int i = 0; i < 3; ++i)
    z = std::max(z, std::abs(mean(i) - params.mean(i)) /
                        std::sqrt(params.cov(i, i) / draws));
  return make_report("gaussian", "sampler-vs-oracle", "dim 3 mean",
                     CheckMethod::monte_carlo, z, 3.0,
                     std::to_string(draws) + " draws", seed,
                     "empirical mean vs parameter mean, per coordinate");
}

// ---------------------------------------------------------------------------
// Criterion registry.
// ---------------------------------------------------------------------------

std::vector<ProjectivityReport> criterion_1(std::uint64_t) {
  return {check_encoding_bijection(7)};
}
std::vector<ProjectivityReport> criterion_2(std::uint64_t) {
  return {check_projection_equivalence(6)};
}
std::vector<ProjectivityReport> criterion_3(std::uint64_t seed) {
  return {check_likelihood_projectivity(6, 20, seed, 1e-10)};
}
std::vector<ProjectivityReport> criterion_4(std::uint64_t seed) {
  return {check_partition_function(7, 20, seed, 1e-10)};
}
std::vector<ProjectivityReport> criterion_5(std::uint64_t seed) {
  return check_w_independence(6, 20, seed, 1e-10);
}
std::vector<ProjectivityReport> criterion_6(std::uint64_t seed) {
  return {check_dirichlet_commute(6, seed, 1e-12)};
}
std::vector<ProjectivityReport> criterion_7(std::uint64_t seed) {
  return {check_gaussian_oracle(100, 8, seed, 1e-8)};
}
std::vector<ProjectivityReport> criterion_8(std::uint64_t) {
  return {check_gaussian_quadrature(1e-4)};
}
std::vector<ProjectivityReport> criterion_9(std::uint64_t seed) {
  return check_composition("", seed, 1e-10);
}
std::vector<ProjectivityReport> criterion_10(std::uint64_t seed) {
  return check_cayley_sampler(4, 1000000, seed, 3.0);
}
std::vector<ProjectivityReport> criterion_11(std::uint64_t seed) {
  return check_concentration_dichotomy(seed);
}
std::vector<ProjectivityReport> criterion_12(std::uint64_t seed) {
  return check_sufficiency("", seed, 1e-10);
}

struct CriterionSpec {
  int id;
  const char* name;
  double limit_seconds;
  std::vector<ProjectivityReport> (*run)(std::uint64_t);
};

const CriterionSpec kCriteria[] = {
    {1, "encoding-bijection", 1.0, criterion_1},
    {2, "projection-equivalence", 5.0, criterion_2},
    {3, "likelihood-projectivity", 30.0, criterion_3},
    {4, "partition-function-factorization", 0.0, criterion_4},
    {5, "w-independence", 0.0, criterion_5},
    {6, "dirichlet-posterior-commute", 0.0, criterion_6},
    {7, "gaussian-posterior-oracle", 0.0, criterion_7},
    {8, "gaussian-quadrature-marginal", 0.0, criterion_8},
    {9, "posterior-composition", 0.0, criterion_9},
    {10, "sampler-vs-oracle", 60.0, criterion_10},
    {11, "concentration-dichotomy", 0.0, criterion_11},
    {12, "sufficiency-factorization", 0.0, criterion_12},
};

}  // namespace

void CheckSuiteResult::add(ProjectivityReport report) {
  pass = pass && report.pass;
  reports.push_back(std::move(report));
}

void validate_config(const ExperimentConfig& config) {
  static const std::set<std::string> models{"dirichlet", "gaussian", "cayley"};
  static const std::set<std::string> checks{
      "projectivity", "commute",       "sufficiency",
      "composition",  "concentration", "sampler-vs-oracle"};
  if (!models.count(config.model))
    throw config_error("unknown model tag: " + config.model);
  if (!checks.count(config.check))
    throw config_error("unknown check tag: " + config.check);
  if (config.n != 0) {
    if (config.model == "cayley" && (config.n < 2 || config.n > 8))
      throw config_error("cayley checks need 2 <= n <= 8 (group enumeration)");
    if (config.model == "dirichlet" && (config.n < 2 || config.n > 8))
      throw config_error(
          "dirichlet checks need 2 <= n <= 8 (partition enumeration)");
    if (config.model == "gaussian" &&
        (config.n < 1 || config.n > kMaxGaussianDim))
      throw config_error("gaussian checks need 1 <= n <= 64");
  }
  if (config.tol_override &&
      (!std::isfinite(*config.tol_override) || *config.tol_override <= 0))
    throw config_error("tolerance override must be positive and finite");
}

CheckSuiteResult run_check(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  const std::uint64_t seed = config.seed;
  CheckSuiteResult out;
  out.label = config.check + "/" + config.model;

  if (config.check == "projectivity" && config.model == "cayley") {
    const int top = config.n ? config.n : 7;
    out.add(check_encoding_bijection(top));
    out.add(check_projection_equivalence(std::max(1, top - 1)));
    out.add(check_cayley_coherence(std::max(3, std::min(top, 6))));
    out.add(check_likelihood_projectivity(std::max(1, std::min(top, 7) - 1),
                                          20, seed, 1e-10));
    out.add(check_cayley_w_map(std::max(2, std::min(top, 5))));
  } else if (config.check == "projectivity" && config.model == "dirichlet") {
    const int atoms = config.n ? config.n : 4;
    out.add(check_partition_coherence(std::min(atoms, 5), seed));
    out.add(check_dirichlet_marginal_exact(atoms, seed, 1e-12));
    out.add(check_dirichlet_moments(atoms, seed, 1e-12));
    out.add(check_dirichlet_count_map(atoms, seed));
  } else if (config.check == "projectivity" && config.model == "gaussian") {
    const int dim = config.n ? config.n : 8;
    out.add(check_coords_coherence(dim, seed));
    out.add(check_gaussian_param_projection(dim));
    out.add(check_gaussian_stat_map(dim, seed));
    out.add(check_gaussian_quadrature(1e-4));
  } else if (config.check == "commute" && config.model == "dirichlet") {
    out.add(check_dirichlet_commute(config.n ? config.n : 4, seed, 1e-12));
  } else if (config.check == "commute" && config.model == "gaussian") {
    const int dim = config.n ? config.n : 8;
    out.add(check_gaussian_commute(dim, std::max(1, dim - 2), 10, seed, 1e-8));
    out.add(check_gaussian_oracle(100, dim, seed, 1e-8));
  } else if (config.check == "commute" && config.model == "cayley") {
    const int hi = config.n ? config.n : 5;
    out.add(check_cayley_posterior_commute(std::max(2, hi - 1), hi, seed));
  } else if (config.check == "sufficiency") {
    if (config.model == "cayley") {
      const int top = config.n ? std::min(config.n, 7) : 7;
      out.add(check_partition_function(top, 20, seed, 1e-10));
      for (auto& r : check_w_independence(std::min(top, 6), 20, seed, 1e-10))
        out.add(std::move(r));
    }
    for (auto& r : check_sufficiency(config.model, seed, 1e-10))
      out.add(std::move(r));
  } else if (config.check == "composition") {
    for (auto& r : check_composition(config.model, seed, 1e-10))
      out.add(std::move(r));
  } else if (config.check == "concentration") {
    if (config.model == "cayley") {
      for (auto& r : check_concentration_dichotomy(seed)) out.add(std::move(r));
      out.add(check_concentration_prefix());
    } else if (config.model == "gaussian") {
      for (auto& r : check_concentration_gaussian()) out.add(std::move(r));
    } else {
      out.add(check_concentration_dp());
    }
  } else if (config.check == "sampler-vs-oracle") {
    if (config.model == "cayley") {
      for (auto& r :
           check_cayley_sampler(config.n ? config.n : 4, 1000000, seed, 3.0))
        out.add(std::move(r));
    } else if (config.model == "dirichlet") {
      for (auto& r : check_dirichlet_sampler(seed)) out.add(std::move(r));
    } else {
      out.add(check_gaussian_sampler(seed));
    }
  }

  if (config.tol_override) {
    // A positive override replaces every positive default tolerance;
    // bitwise-exact gates (tolerance 0) are never relaxed.
    CheckSuiteResult adjusted;
    adjusted.label = out.label;
    for (const auto& r : out.reports) {
      if (r.tolerance > 0.0)
        adjusted.add(make_report(r.model, r.check, r.pair, r.method,
                                 r.max_deviation, *config.tol_override,
                                 r.sample_spec, r.seed, r.note));
      else
        adjusted.add(r);
    }
    adjusted.seconds = elapsed(start);
    return adjusted;
  }
  out.seconds = elapsed(start);
  return out;
}

int criterion_count() { return static_cast<int>(std::size(kCriteria)); }

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > criterion_count())
    throw config_error("criterion id out of range: " + std::to_string(id));
  const CriterionSpec& spec = kCriteria[id - 1];
  const auto start = Clock::now();
  CriterionResult result;
  result.id = spec.id;
  result.name = spec.name;
  result.limit_seconds = spec.limit_seconds;
  result.reports = spec.run(derive_seed(seed, 77000 + id));
  result.seconds = elapsed(start);
  result.pass = true;
  for (const auto& r : result.reports) result.pass = result.pass && r.pass;
  if (spec.limit_seconds > 0.0 && result.seconds > spec.limit_seconds)
    result.pass = false;
  return result;
}

std::vector<CriterionResult> run_all_criteria(std::uint64_t seed) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= criterion_count(); ++id)
    results.push_back(run_criterion(id, seed));
  return results;
}

CheckSuiteResult run_full_suite(std::uint64_t seed) {
  const auto start = Clock::now();
  CheckSuiteResult out;
  out.label = "full-suite";
  for (const CriterionResult& c : run_all_criteria(seed)) {
    out.pass = out.pass && c.pass;
    for (const auto& r : c.reports) out.reports.push_back(r);
  }
  out.seconds = elapsed(start);
  return out;
}

void export_reports(const std::vector<ProjectivityReport>& reports,
                    const std::string& path, ExportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + path);
  if (format == ExportFormat::csv) {
    out << csv_header() << "\n";
    for (const auto& r : reports) out << to_csv_line(r) << "\n";
  } else {
    for (const auto& r : reports) out << to_json_line(r) << "\n";
  }
  if (!out.good()) throw config_error("failed writing output file: " + path);
}

}  // namespace projlim
