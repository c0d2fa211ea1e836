#ifndef UMAP_WEINGARTEN_HPP
#define UMAP_WEINGARTEN_HPP

#include <gmpxx.h>

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "umap/ncpoly.hpp"
#include "umap/perm.hpp"

namespace umap {

// Wg_N on S_q, one exact value per cycle type.
class WeingartenTable {
 public:
  static std::shared_ptr<const WeingartenTable> get(int q, int N);  // cached
  static WeingartenTable build(int q, int N);

  int q() const { return q_; }
  int N() const { return N_; }
  const std::map<std::vector<int>, mpq_class>& values() const { return values_; }
  const mpq_class& at(const std::vector<int>& cycle_type) const;

 private:
  int q_ = 0, N_ = 0;
  std::map<std::vector<int>, mpq_class> values_;
};

mpq_class weingarten_exact(const Permutation& pi, int N);
// Σ_{r≤R} (−1)^r w^r(Id, π) / N^{r+q}
mpq_class weingarten_series_partial(const Permutation& pi, int N, int R);

// (Tr_{γπ⁻¹}(M) in normalized form with its N^{c} factor folded in, Wg_N(π^(ε)))
std::pair<TraceExpr, mpq_class> moment_weight(const Permutation& gamma, const Permutation& pi,
                                              const std::vector<Word>& M, const SignVector& eps,
                                              int N);

// integer partitions of q in decreasing-part order, e.g. {3},{2,1},{1,1,1}
std::vector<std::vector<int>> partitions_of(int q);
std::vector<int> parse_cycle_type(const std::string& text);  // "2+1+1"

}  // namespace umap

#endif
