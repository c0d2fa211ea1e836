#ifndef UMAP_PERM_HPP
#define UMAP_PERM_HPP

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace umap {

// Bijection of a finite sorted label set onto itself.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::vector<int> domain);
  static Permutation identity_n(int n);
  static Permutation from_images(std::vector<int> domain, std::vector<int> images);
  static Permutation from_cycles(std::vector<int> domain,
                                 const std::vector<std::vector<int>>& cycles);
  static Permutation transposition(std::vector<int> domain, int i, int j);
  // Cycle notation "(1 3 4 6)(2 5)"; commas are accepted as separators.
  static Permutation parse(std::string_view text, std::vector<int> domain);
  // Same, with domain {1..max label seen} when n == 0, else {1..n}.
  static Permutation parse_n(std::string_view text, int n = 0);

  const std::vector<int>& domain() const { return dom_; }
  const std::vector<int>& images() const { return img_; }
  int size() const { return static_cast<int>(dom_.size()); }
  bool contains(int x) const;
  int index_of(int x) const;  // -1 when absent
  int operator()(int x) const;

  std::vector<std::vector<int>> cycles() const;
  int num_cycles() const;
  // cycle lengths, sorted in decreasing order
  std::vector<int> cycle_type() const;
  bool is_identity() const;
  Permutation inverse() const;
  std::string str() const;

  bool operator==(const Permutation& o) const;
  // total order used for containers; compares domains first
  std::strong_ordering operator<=>(const Permutation& o) const;

 private:
  std::vector<int> dom_;
  std::vector<int> img_;
};

void require_same_domain(const Permutation& a, const Permutation& b);

// (a∘b)(x) = a(b(x))
Permutation compose(const Permutation& a, const Permutation& b);
Permutation operator*(const Permutation& a, const Permutation& b);
// g⁻¹σg
Permutation conjugate(const Permutation& s, const Permutation& g);
// first-return map of s on the subset B
Permutation trace_restrict(const Permutation& s, const std::vector<int>& B);
// restriction of a permutation that stabilizes B
Permutation restrict_to(const Permutation& s, const std::vector<int>& B);
// relabel x -> f(x) for every label; f given as parallel vectors
Permutation relabel(const Permutation& s, const std::vector<int>& from, const std::vector<int>& to);

struct Transposition {
  int i = 0, j = 0;  // i < j
  Transposition() = default;
  Transposition(int a, int b);
  int value() const { return j; }
  auto operator<=>(const Transposition&) const = default;
};

class SignVector {
 public:
  SignVector() = default;
  SignVector(std::vector<int> domain, std::vector<int> signs);
  // signs given for labels 1..n
  static SignVector from_signs(std::vector<int> signs);
  static SignVector parse(std::string_view pm);  // "+-+-"

  const std::vector<int>& domain() const { return dom_; }
  const std::vector<int>& signs() const { return sgn_; }
  int operator()(int x) const;
  std::vector<int> plus_set() const;
  std::vector<int> minus_set() const;
  bool balanced() const;
  std::string str() const;
  bool operator==(const SignVector&) const = default;

 private:
  std::vector<int> dom_;
  std::vector<int> sgn_;
};

bool is_sign_compatible(const Permutation& pi, const SignVector& eps);
// π² restricted to the +1 set
Permutation pi_eps(const Permutation& pi, const SignVector& eps);
// all sign-compatible permutations, in lexicographic one-line order
std::vector<Permutation> sign_compatible_permutations(const SignVector& eps);

std::vector<int> iota_labels(int n);
std::vector<int> label_union(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> label_difference(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace umap

#endif
