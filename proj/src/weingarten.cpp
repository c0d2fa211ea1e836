#include "umap/weingarten.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "umap/walks.hpp"

namespace umap {

namespace {

void partitions_rec(int rem, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (rem == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(rem, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(rem - p, p, cur, out);
    cur.pop_back();
  }
}

int cycles_of(const std::vector<int>& img) {
  int c = 0;
  std::vector<char> seen(img.size(), 0);
  for (size_t k = 0; k < img.size(); ++k) {
    if (seen[k]) continue;
    ++c;
    for (size_t at = k; !seen[at]; at = static_cast<size_t>(img[at])) seen[at] = 1;
  }
  return c;
}

std::vector<int> type_of(const std::vector<int>& img) {
  std::vector<int> t;
  std::vector<char> seen(img.size(), 0);
  for (size_t k = 0; k < img.size(); ++k) {
    if (seen[k]) continue;
    int len = 0;
    for (size_t at = k; !seen[at]; at = static_cast<size_t>(img[at])) seen[at] = 1, ++len;
    t.push_back(len);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

std::vector<int> representative(const std::vector<int>& type) {
  std::vector<int> img;
  int start = 0;
  for (int len : type) {
    for (int k = 0; k < len; ++k) img.push_back(start + (k + 1) % len);
    start += len;
  }
  return img;
}

// Solves A x = b exactly by Gaussian elimination with pivot search.
std::vector<mpq_class> solve(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> b) {
  const size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && sgn(A[piv][col]) == 0) ++piv;
    if (piv == n) throw std::runtime_error("singular Gram system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t row = 0; row < n; ++row) {
      if (row == col || sgn(A[row][col]) == 0) continue;
      mpq_class f = A[row][col] / A[col][col];
      for (size_t k = col; k < n; ++k) A[row][k] -= f * A[col][k];
      b[row] -= f * b[col];
    }
  }
  for (size_t k = 0; k < n; ++k) b[k] /= A[k][k];
  return b;
}

}  // namespace

std::vector<std::vector<int>> partitions_of(int q) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(q, q, cur, out);
  return out;
}

std::vector<int> parse_cycle_type(const std::string& text) {
  std::vector<int> t;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, '+');) {
    part.erase(std::remove(part.begin(), part.end(), ' '), part.end());
    if (part.empty()) throw std::invalid_argument("bad cycle type '" + text + "'");
    size_t used = 0;
    int v = std::stoi(part, &used);
    if (used != part.size() || v < 1) throw std::invalid_argument("bad cycle type '" + text + "'");
    t.push_back(v);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

WeingartenTable WeingartenTable::build(int q, int N) {
  if (q < 1) throw std::invalid_argument("Weingarten: q must be positive");
  if (q > 10) throw std::invalid_argument("Weingarten: q > 10 not supported");
  if (N < q) throw std::domain_error("Weingarten: N < q is outside the invertible regime");
  auto types = partitions_of(q);
  const size_t P = types.size();
  std::map<std::vector<int>, size_t> index;
  for (size_t k = 0; k < P; ++k) index[types[k]] = k;

  std::vector<std::vector<int>> reps;
  for (const auto& t : types) reps.push_back(representative(t));
  // K[μ][λ] = Σ_{π ∈ C_λ} N^{c(σ_μ π⁻¹)}; integers via cycle-count histograms
  std::vector<std::vector<std::vector<long>>> hist(P, std::vector<std::vector<long>>(P, std::vector<long>(q + 1, 0)));
  std::vector<int> pi(q);
  std::iota(pi.begin(), pi.end(), 0);
  std::vector<int> inv(q), prod(q);
  do {
    size_t lam = index.at(type_of(pi));
    for (int k = 0; k < q; ++k) inv[pi[k]] = k;
    for (size_t mu = 0; mu < P; ++mu) {
      for (int k = 0; k < q; ++k) prod[k] = reps[mu][inv[k]];
      ++hist[mu][lam][cycles_of(prod)];
    }
  } while (std::next_permutation(pi.begin(), pi.end()));

  std::vector<mpz_class> pw(q + 1, 1);
  for (int c = 1; c <= q; ++c) pw[c] = pw[c - 1] * N;
  std::vector<std::vector<mpq_class>> K(P, std::vector<mpq_class>(P, 0));
  for (size_t mu = 0; mu < P; ++mu)
    for (size_t lam = 0; lam < P; ++lam) {
      mpz_class s = 0;
      for (int c = 0; c <= q; ++c) s += pw[c] * hist[mu][lam][c];
      K[mu][lam] = s;
    }
  std::vector<mpq_class> rhs(P, 0);
  rhs[index.at(std::vector<int>(q, 1))] = 1;
  auto w = solve(std::move(K), std::move(rhs));

  WeingartenTable t;
  t.q_ = q;
  t.N_ = N;
  for (size_t k = 0; k < P; ++k) t.values_[types[k]] = w[k];
  return t;
}

std::shared_ptr<const WeingartenTable> WeingartenTable::get(int q, int N) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const WeingartenTable>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({q, N}); it != cache.end()) return it->second;
  }
  auto t = std::make_shared<const WeingartenTable>(build(q, N));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(q, N), t).first->second;
}

const mpq_class& WeingartenTable::at(const std::vector<int>& cycle_type) const {
  auto it = values_.find(cycle_type);
  if (it == values_.end()) throw std::invalid_argument("cycle type does not partition q");
  return it->second;
}

mpq_class weingarten_exact(const Permutation& pi, int N) {
  return WeingartenTable::get(pi.size(), N)->at(pi.cycle_type());
}

mpq_class weingarten_series_partial(const Permutation& pi, int N, int R) {
  const int q = pi.size();
  if (N < q) throw std::domain_error("Weingarten series: N < q");
  if (R < 0) throw std::invalid_argument("Weingarten series: R < 0");
  auto w = count_monotone_walks_upto(pi, R);
  mpq_class s = 0;
  mpz_class denom;
  mpz_pow_ui(denom.get_mpz_t(), mpz_class(N).get_mpz_t(), static_cast<unsigned long>(q));
  for (int r = 0; r <= R; ++r) {
    mpq_class term(w[r], denom);
    term.canonicalize();
    s += (r % 2 ? -term : term);
    denom *= N;
  }
  return s;
}

std::pair<TraceExpr, mpq_class> moment_weight(const Permutation& gamma, const Permutation& pi,
                                              const std::vector<Word>& M, const SignVector& eps,
                                              int N) {
  if (!is_sign_compatible(pi, eps)) throw std::invalid_argument("moment_weight: pi is not sign-compatible");
  Permutation phi = compose(gamma, pi.inverse());
  mpz_class Nc;
  mpz_pow_ui(Nc.get_mpz_t(), mpz_class(N).get_mpz_t(), static_cast<unsigned long>(phi.num_cycles()));
  TraceExpr T = trace_of_permutation(phi, M) * CQ(mpq_class(Nc));
  Permutation pe = pi_eps(pi, eps);
  Permutation std_pe = relabel(pe, pe.domain(), iota_labels(pe.size()));
  return {T, weingarten_exact(std_pe, N)};
}

}  // namespace umap
