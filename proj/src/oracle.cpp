#include "umap/oracle.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>
#include <thread>

namespace umap {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Block Philox4x32::bijection(Block c, Key k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), substream} {}

std::uint32_t Philox4x32::next_word() {
  if (used_ == 4) {
    buf_ = bijection(ctr_, key_);
    ++ctr_[0];
    used_ = 0;
  }
  return buf_[used_++];
}

double Philox4x32::uniform() {
  std::uint64_t a = next_word() >> 5, b = next_word() >> 6;  // 27 + 26 bits
  return (static_cast<double>((a << 26) | b) + 0.5) * 0x1p-53;
}

std::complex<double> Philox4x32::complex_gaussian() {
  double u1 = uniform(), u2 = uniform();
  double r = std::sqrt(-std::log(u1));  // radius for variance 1/2 per component
  double t = 2 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

void MatrixTuple::validate() const {
  if (N < 1) throw std::invalid_argument("matrix dimension must be positive");
  for (const auto& [j, M] : A) {
    if (M.rows() != N || M.cols() != N)
      throw std::invalid_argument("matrix a" + std::to_string(j) + " is not " + std::to_string(N) + "x" +
                                  std::to_string(N));
    if (bounded) {
      double norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0);
      if (norm > 1 + 1e-12) throw std::invalid_argument("matrix a" + std::to_string(j) + " has norm > 1");
    }
  }
}

Eigen::MatrixXcd sample_haar(int N, std::uint64_t seed, std::uint64_t stream, std::uint32_t substream) {
  if (N < 1) throw std::invalid_argument("sample_haar: N must be positive");
  Philox4x32 rng(seed, stream, substream);
  Eigen::MatrixXcd Z(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) Z(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(N, N);
  const auto& R = qr.matrixQR();
  for (int i = 0; i < N; ++i) {
    std::complex<double> d = R(i, i);
    double a = std::abs(d);
    if (a > 0) Q.col(i) *= d / a;
  }
  return Q;
}

MatrixTuple seeded_contractions(int N, const std::vector<int>& indices, std::uint64_t seed) {
  MatrixTuple T;
  T.N = N;
  T.bounded = true;
  for (int j : indices) {
    Philox4x32 rng(seed, 0xC0417AC7ull, static_cast<std::uint32_t>(j));
    Eigen::MatrixXcd G(N, N);
    for (int c = 0; c < N; ++c)
      for (int r = 0; r < N; ++r) G(r, c) = rng.complex_gaussian();
    T.A[j] = G / Eigen::JacobiSVD<Eigen::MatrixXcd>(G).singularValues()(0);
  }
  return T;
}

Eigen::MatrixXcd evaluate_word(const Word& w, const MatrixMap& unitaries, const MatrixTuple& A) {
  return word_matrix(w, unitaries, A.A, A.N);
}

namespace {

using cd = std::complex<double>;

cd plug_in_cumulant(const std::vector<std::vector<cd>>& x, long begin, long end) {
  int l = static_cast<int>(x.size());
  double n = static_cast<double>(end - begin);
  std::function<cd(const std::vector<int>&)> moment = [&](const std::vector<int>& idx) {
    cd sum = 0;
    for (long s = begin; s < end; ++s) {
      cd p = 1;
      for (int k : idx) p *= x[k][s];
      sum += p;
    }
    return sum / n;
  };
  return cumulant_from_moments<cd>(l, moment);
}

std::vector<std::vector<cd>> sample_traces(const Tuple& P, const MatrixTuple& A, const SamplingOptions& opt) {
  if (opt.samples < 2) throw std::invalid_argument("need at least two samples");
  if (P.empty()) throw std::invalid_argument("empty tuple");
  A.validate();
  const int N = A.N;
  const int l = static_cast<int>(P.size());
  std::set<int> colors;
  for (const auto& w : P)
    for (int c : colors_of(w)) colors.insert(c);

  std::vector<std::vector<cd>> x(l, std::vector<cd>(opt.samples));
  auto work = [&](long begin, long end) {
    for (long s = begin; s < end; ++s) {
      MatrixMap U;
      for (int c : colors) U[c] = sample_haar(N, opt.seed, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(c));
      for (int k = 0; k < l; ++k) x[k][s] = evaluate_word(P[k], U, A).trace();
    }
  };
  int threads = std::max(1, opt.threads);
  if (threads == 1) {
    work(0, opt.samples);
  } else {
    std::vector<std::thread> pool;
    long chunk = (opt.samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      long b = t * chunk, e = std::min<long>(opt.samples, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return x;
}

void finish(SampleReport& rep, const TraceExpr& exact, const MatrixTuple& A) {
  rep.target = evaluate_trace_expression(exact, A.A, A.N);
  // almost surely constant traces have a round-off stderr; distances are measured against
  // at least the floating-point resolution of the target
  double floor = 1e-10 * (1 + std::abs(rep.target));
  rep.sigma_distance = std::abs(rep.estimate - rep.target) / std::max(rep.std_error, floor);
}

double mean_std_error(const std::vector<cd>& v, cd mean) {
  double ss = 0;
  for (const cd& z : v) ss += std::norm(z - mean);
  double n = static_cast<double>(v.size());
  return std::sqrt(ss / (n - 1) / n);
}

}  // namespace

SampleReport empirical_joint_cumulant(const Tuple& P, const MatrixTuple& A, const SamplingOptions& opt) {
  auto x = sample_traces(P, A, opt);
  const int l = static_cast<int>(P.size());
  SampleReport rep;
  rep.samples = opt.samples;
  rep.estimate = plug_in_cumulant(x, 0, opt.samples);
  if (l == 1) {
    rep.std_error = mean_std_error(x[0], rep.estimate);
  } else {
    int B = std::max(2, std::min<int>(opt.batches, static_cast<int>(opt.samples / 2)));
    std::vector<cd> est(B);
    cd mean = 0;
    for (int b = 0; b < B; ++b) {
      long lo = opt.samples * b / B, hi = opt.samples * (b + 1) / B;
      est[b] = plug_in_cumulant(x, lo, hi);
      mean += est[b];
    }
    mean /= static_cast<double>(B);
    rep.std_error = mean_std_error(est, mean);
  }
  finish(rep, cumulant_haar(P, A.N), A);
  return rep;
}

SampleReport empirical_joint_moment(const Tuple& P, const MatrixTuple& A, const SamplingOptions& opt) {
  auto x = sample_traces(P, A, opt);
  std::vector<cd> prod(opt.samples, cd(1));
  for (const auto& col : x)
    for (long s = 0; s < opt.samples; ++s) prod[s] *= col[s];
  SampleReport rep;
  rep.samples = opt.samples;
  cd sum = 0;
  for (const cd& v : prod) sum += v;
  rep.estimate = sum / static_cast<double>(opt.samples);
  rep.std_error = mean_std_error(prod, rep.estimate);
  finish(rep, moment_haar(P, A.N), A);
  return rep;
}

}  // namespace umap
