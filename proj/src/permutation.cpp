#include "projlim/permutation.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <string>

namespace projlim {

Permutation::Permutation(std::vector<int> one_line) : img_(std::move(one_line)) {
  const int n = static_cast<int>(img_.size());
  if (n == 0) throw domain_error("permutation must have size >= 1");
  std::vector<char> seen(n, 0);
  for (int v : img_) {
    if (v < 1 || v > n || seen[v - 1])
      throw domain_error("one-line image is not a bijection of {1..n}");
    seen[v - 1] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  return Permutation(std::move(img));
}

Permutation Permutation::compose(const Permutation& rhs) const {
  if (size() != rhs.size())
    throw domain_error("compose: size mismatch " + std::to_string(size()) +
                       " vs " + std::to_string(rhs.size()));
  std::vector<int> img(img_.size());
  for (int i = 1; i <= size(); ++i) img[i - 1] = of(rhs.of(i));
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> img(img_.size());
  for (int i = 1; i <= size(); ++i) img[of(i) - 1] = i;
  return Permutation(std::move(img));
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(img_.size(), 0);
  for (int start = 1; start <= size(); ++start) {
    if (seen[start - 1]) continue;
    std::vector<int> cyc;
    int cur = start;
    do {
      seen[cur - 1] = 1;
      cyc.push_back(cur);
      cur = of(cur);
    } while (cur != start);
    out.push_back(std::move(cyc));
  }
  return out;
}

int Permutation::cycle_count() const {
  int count = 0;
  std::vector<char> seen(img_.size(), 0);
  for (int start = 1; start <= size(); ++start) {
    if (seen[start - 1]) continue;
    ++count;
    for (int cur = start; !seen[cur - 1]; cur = of(cur)) seen[cur - 1] = 1;
  }
  return count;
}

Permutation decode(const PermutationEncoding& enc) {
  const int n = static_cast<int>(enc.k.size());
  if (n == 0) throw domain_error("encoding must have size >= 1");
  std::vector<int> img(n);
  for (int j = 1; j <= n; ++j) {
    const int kj = enc.k[j - 1];
    if (kj < 1 || kj > j)
      throw domain_error("encoding coordinate " + std::to_string(j) +
                         " out of bounds: " + std::to_string(kj));
    if (kj == j) {
      img[j - 1] = j;
    } else {
      img[j - 1] = img[kj - 1];
      img[kj - 1] = j;
    }
  }
  return Permutation(std::move(img));
}

PermutationEncoding encode(const Permutation& pi) {
  const int n = pi.size();
  std::vector<int> img = pi.one_line();
  std::vector<int> inv(n);
  for (int i = 1; i <= n; ++i) inv[img[i - 1] - 1] = i;
  std::vector<int> k(n);
  // Peel off the largest element; the insertion that placed j is undone by
  // splicing j out of its cycle, so only elements < j remain in play.
  for (int j = n; j >= 1; --j) {
    if (img[j - 1] == j) {
      k[j - 1] = j;
    } else {
      const int a = inv[j - 1];
      assert(a < j);
      k[j - 1] = a;
      img[a - 1] = img[j - 1];
      inv[img[j - 1] - 1] = a;
    }
  }
  return PermutationEncoding{std::move(k)};
}

Permutation project_down(const Permutation& pi) {
  if (pi.size() < 2)
    throw domain_error("projection needs size >= 2");
  PermutationEncoding enc = encode(pi);
  enc.k.pop_back();
  return decode(enc);
}

Permutation project_down_cycle(const Permutation& pi) {
  const int n = pi.size();
  if (n < 2) throw domain_error("projection needs size >= 2");
  std::vector<int> img(pi.one_line().begin(), pi.one_line().end() - 1);
  const int b = pi.of(n);
  if (b != n) {
    // a -> n -> b becomes a -> b.
    for (int i = 1; i < n; ++i) {
      if (img[i - 1] == n) {
        img[i - 1] = b;
        break;
      }
    }
  }
  return Permutation(std::move(img));
}

int cayley_distance(const Permutation& pi, const Permutation& pi0) {
  if (pi.size() != pi0.size())
    throw domain_error("cayley_distance: size mismatch");
  return pi.size() - pi.compose(pi0.inverse()).cycle_count();
}

std::vector<int> suffstat_w(const Permutation& pi) {
  const int n = pi.size();
  std::vector<int> w(n, 1);
  std::vector<char> seen(n, 0);
  for (int start = 1; start <= n; ++start) {
    if (seen[start - 1]) continue;
    w[start - 1] = 0;  // start is the minimum of an unseen cycle
    for (int cur = start; !seen[cur - 1]; cur = pi.of(cur)) seen[cur - 1] = 1;
  }
  return w;
}

std::vector<int> suffstat_w_encoding(const Permutation& pi) {
  const PermutationEncoding enc = encode(pi);
  const int n = pi.size();
  std::vector<int> w(n);
  for (int j = 1; j <= n; ++j) w[j - 1] = enc.k[j - 1] == j ? 0 : 1;
  return w;
}

std::vector<Permutation> enumerate_sn(int n) {
  if (n < 1 || n > kMaxEnumerationN)
    throw capability_error("enumeration supports 1 <= n <= " +
                           std::to_string(kMaxEnumerationN) + ", got " +
                           std::to_string(n));
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

}  // namespace projlim
