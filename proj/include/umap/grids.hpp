#ifndef UMAP_GRIDS_HPP
#define UMAP_GRIDS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "umap/expansion.hpp"

namespace umap {

// Outcome of an exhaustive or seeded verification sweep.
struct GridReport {
  std::string name;
  long checked = 0;
  long failures = 0;
  std::vector<std::string> failing;     // first few failing instances
  std::map<std::string, std::string> details;
  double seconds = 0;
  bool ok() const { return checked > 0 && failures == 0; }
  void fail(const std::string& what);
};

// R-term series against the exact inverse, per class, for q ≤ max_q and q ≤ N ≤ q + 4.
GridReport weingarten_grid(int max_q, int R, double tol);

// Every map enumerated for (ρ, ε) drawn from the given seeds with |I| ≤ max_labels and
// r ≤ max_r must survive the round trip through the embedded structure; the worked
// example map is checked on top.
GridReport bijection_grid(int seeds, int max_labels, int max_r);

// Both Tutte forms on all generic tuples of degree ≤ max_deg, length ≤ max_l, g ≤ G.
GridReport tutte_grid(int G, int max_deg, int max_l, int colors, int threads);

// |N^{l−2} c_l − M^(0) − N^{−2} M^(1)| at N = 8, 16, 32 for the two test tuples, with
// 2×2 rational contractions embedded block-diagonally.
struct ConvergenceRow {
  std::string tuple;
  std::vector<int> N;
  std::vector<double> residual;
  std::vector<double> ratio;  // residual(N)/residual(2N)
  bool exact_zero = false;
};
GridReport convergence_report(std::vector<ConvergenceRow>* rows = nullptr);

// hurwitz_reduction against genus_coefficient on alternated tuples; the HCIZ case
// (every m_i = 1) is included up to max_m entries.
GridReport hurwitz_grid(int G, int max_m, int max_l, int threads);

// Traciality, symmetry, u*Pu-simplification and conjugation as exact identities.
GridReport prop_m0_grid(int G, int max_deg, int max_l, int colors, int threads);
// |M^(0)_{0,1}(P)| ≤ 1 under unit traces and at seeded contractions.
GridReport bound01_grid(int max_deg, int colors);

GridReport bounds_grid(int G, int max_k, int max_total, int threads);

GridReport gradient_grid(int max_deg, int colors);
GridReport master_grid(int max_deg);
GridReport norm_bound_grid(int count, double xi1, double xi2, std::uint64_t seed);

// Monte Carlo cells at each N: E|Tr U|², E[Tr(AUBU*)], c₂(Tr u, Tr u⁻¹) and seeded words.
struct McCell {
  std::string label;
  int N = 0;
  std::complex<double> estimate, target;
  double std_error = 0, sigma = 0;
};
GridReport mc_grid(const std::vector<int>& Ns, long samples, int words, std::uint64_t seed, double k_sigma,
                   double min_fraction, int threads, std::vector<McCell>* cells = nullptr);

// Runs f(i) for i < n on up to `threads` workers.
void parallel_for(long n, int threads, const std::function<void(long)>& f);

}  // namespace umap

#endif
