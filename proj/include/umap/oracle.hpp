#ifndef UMAP_ORACLE_HPP
#define UMAP_ORACLE_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "umap/expansion.hpp"
#include "umap/ncpoly.hpp"

namespace umap {

// Philox4x32-10 (Salmon et al., Random123). Multipliers 0xD2511F53, 0xCD9E8D57;
// Weyl key increments 0x9E3779B9, 0xBB67AE85.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Block bijection(Block counter, Key key);

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0, std::uint32_t substream = 0);
  // next 53-bit uniform strictly inside (0, 1)
  double uniform();
  // standard complex Gaussian, E|z|² = 1, via Box–Muller
  std::complex<double> complex_gaussian();

 private:
  Key key_;
  Block ctr_;
  Block buf_{};
  int used_ = 4;
  std::uint32_t next_word();
};

struct MatrixTuple {
  int N = 0;
  MatrixMap A;
  bool bounded = false;  // require operator norm ≤ 1
  void validate() const;
};

struct SampleReport {
  std::complex<double> estimate;
  double std_error = 0;
  long samples = 0;
  std::complex<double> target;
  double sigma_distance = 0;  // |estimate − target| / max(stderr, 1e-10 (1 + |target|))
  bool within(double k) const { return sigma_distance <= k; }
};

// Phase-corrected QR of a complex Ginibre matrix.
Eigen::MatrixXcd sample_haar(int N, std::uint64_t seed, std::uint64_t stream = 0,
                             std::uint32_t substream = 0);
// Ginibre matrices scaled to operator norm 1, one per index, from Philox substreams.
MatrixTuple seeded_contractions(int N, const std::vector<int>& indices, std::uint64_t seed);
Eigen::MatrixXcd evaluate_word(const Word& w, const MatrixMap& unitaries, const MatrixTuple& A);

struct SamplingOptions {
  long samples = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  int batches = 16;
};

// Plug-in estimate of c_l(Tr P₁, …, Tr P_l) at V = 0; the target is the exact
// Weingarten cumulant evaluated at A. Sample s uses Philox stream s and one
// substream per color, so the report does not depend on the thread count.
SampleReport empirical_joint_cumulant(const Tuple& P, const MatrixTuple& A, const SamplingOptions& opt);
// E[Tr P₁ ⋯ Tr P_l] by the sample mean, stderr = sd/√samples, target from moment_haar.
SampleReport empirical_joint_moment(const Tuple& P, const MatrixTuple& A, const SamplingOptions& opt);

}  // namespace umap

#endif
