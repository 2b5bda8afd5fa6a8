#pragma once

#include <vector>

#include "projlim/errors.hpp"

namespace projlim {

// Permutation of {1..n} in one-line form: one_line()[i-1] == pi(i).
class Permutation {
 public:
  // Throws domain_error unless the image is a bijection of {1..n}.
  explicit Permutation(std::vector<int> one_line);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(img_.size()); }
  int of(int i) const { return img_[i - 1]; }
  const std::vector<int>& one_line() const { return img_; }

  Permutation compose(const Permutation& rhs) const;  // (*this)(rhs(i))
  Permutation inverse() const;

  // Cycles listed with their minimum first, ordered by minimum.
  std::vector<std::vector<int>> cycles() const;
  int cycle_count() const;

  bool operator==(const Permutation&) const = default;
  bool operator<(const Permutation& rhs) const { return img_ < rhs.img_; }

 private:
  std::vector<int> img_;
};

// Insertion encoding: k[i-1] = k_i with 1 <= k_i <= i. Element i either opens
// its own cycle (k_i == i) or is inserted into the cycle of k_i, directly
// after k_i. decode and encode are mutually inverse bijections.
struct PermutationEncoding {
  std::vector<int> k;
  bool operator==(const PermutationEncoding&) const = default;
};

PermutationEncoding encode(const Permutation& pi);
Permutation decode(const PermutationEncoding& enc);  // throws on k_i > i

// Projection S_{n+1} -> S_n. project_down drops the last encoding coordinate;
// project_down_cycle splices n+1 out of its cycle without touching the
// encoding. The two must agree on all inputs; tests compare them exhaustively.
Permutation project_down(const Permutation& pi);
Permutation project_down_cycle(const Permutation& pi);

// Minimal number of transpositions turning pi0 into pi:
// n - #cycles(pi * pi0^-1). Throws domain_error on size mismatch.
int cayley_distance(const Permutation& pi, const Permutation& pi0);

// w[j-1] == 0 iff j is the smallest element of its cycle; equivalently
// w[j-1] == 1 - (k_j == j). suffstat_w walks cycles, suffstat_w_encoding
// reads the encoding; they are independent routes for cross-checking.
// sum(w) == cayley_distance(pi, identity). w[0] is always 0.
std::vector<int> suffstat_w(const Permutation& pi);
std::vector<int> suffstat_w_encoding(const Permutation& pi);

inline constexpr int kMaxEnumerationN = 8;

// All of S_n in lexicographic one-line order. n! entries; n <= 8.
std::vector<Permutation> enumerate_sn(int n);

}  // namespace projlim
