#ifndef UMAP_WALKS_HPP
#define UMAP_WALKS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "umap/perm.hpp"

namespace umap {

struct MonotoneWalk {
  std::vector<Transposition> steps;

  int length() const { return static_cast<int>(steps.size()); }
  bool is_monotone() const;
  // τ_r ··· τ₁ on the given domain
  Permutation product(const std::vector<int>& domain) const;
  std::string str() const;
  auto operator<=>(const MonotoneWalk&) const = default;
};

// All weakly monotone walks of length r with τ_r···τ₁ = target, lexicographic.
std::vector<MonotoneWalk> enumerate_monotone_walks(const Permutation& target, int r);
mpz_class count_monotone_walks(const Permutation& target, int r);
// counts for r = 0..R in one memoized sweep
std::vector<mpz_class> count_monotone_walks_upto(const Permutation& target, int R);

bool is_transitive(const std::vector<Permutation>& generators, const std::vector<int>& I);
// orbits of the generated group as block ids over positions of I
std::vector<int> orbit_blocks(const std::vector<Permutation>& generators, const std::vector<int>& I);

mpz_class monotone_triple_hurwitz(const Permutation& rho, const Permutation& gamma,
                                  const Permutation& sigma, int r);
mpz_class monotone_hurwitz_by_genus(const Permutation& rho, const Permutation& gamma,
                                    const Permutation& sigma, int g);

// Counts tuples of monotone walks, one per color class, of total length r, each
// composing to its color's target. Labels are global positions 0..n-1; a color
// class lists its positions in increasing label order. With a nonempty initial
// partition, only tuples whose steps merge it into one block are counted.
class WalkCounter {
 public:
  using LocalPerm = std::vector<std::uint8_t>;
  WalkCounter(std::vector<std::vector<int>> classes, int n_global);

  mpz_class count(const std::vector<LocalPerm>& targets, int r,
                  const std::vector<std::uint8_t>& initial_blocks = {});
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  size_t memo_size() const { return memo_.size(); }

 private:
  struct Frame;
  mpz_class rec(const Frame& f, int c, int i, int rem, LocalPerm& R, std::vector<std::uint8_t>& B);

  std::vector<std::vector<int>> classes_;
  int n_;
  std::unordered_map<std::string, mpz_class> memo_;
};

int local_cycles(const WalkCounter::LocalPerm& p);
std::vector<std::uint8_t> canonical_blocks(std::vector<std::uint8_t> b);

}  // namespace umap

#endif
