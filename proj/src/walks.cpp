#include "umap/walks.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace umap {

bool MonotoneWalk::is_monotone() const {
  for (size_t k = 1; k < steps.size(); ++k)
    if (steps[k - 1].value() > steps[k].value()) return false;
  return true;
}

Permutation MonotoneWalk::product(const std::vector<int>& domain) const {
  Permutation p = Permutation::identity(domain);
  for (const auto& t : steps) p = compose(Permutation::transposition(domain, t.i, t.j), p);
  return p;
}

std::string MonotoneWalk::str() const {
  std::ostringstream os;
  os << '[';
  for (size_t k = 0; k < steps.size(); ++k) os << (k ? "," : "") << '(' << steps[k].i << ' ' << steps[k].j << ')';
  os << ']';
  return os.str();
}

int local_cycles(const WalkCounter::LocalPerm& p) {
  int c = 0;
  std::uint32_t seen = 0;
  for (size_t k = 0; k < p.size(); ++k) {
    if (seen >> k & 1u) continue;
    ++c;
    for (size_t at = k; !(seen >> at & 1u); at = p[at]) seen |= 1u << at;
  }
  return c;
}

std::vector<std::uint8_t> canonical_blocks(std::vector<std::uint8_t> b) {
  std::uint8_t map[256];
  std::fill(std::begin(map), std::end(map), 0xff);
  std::uint8_t next = 0;
  for (auto& x : b) {
    if (map[x] == 0xff) map[x] = next++;
    x = map[x];
  }
  return b;
}

namespace {

WalkCounter::LocalPerm to_local(const Permutation& p) {
  WalkCounter::LocalPerm out(p.size());
  for (int k = 0; k < p.size(); ++k) out[k] = static_cast<std::uint8_t>(p.index_of(p.images()[k]));
  return out;
}

bool single_block(const std::vector<std::uint8_t>& B) {
  return std::all_of(B.begin(), B.end(), [](std::uint8_t x) { return x == 0; });
}

void merge_blocks(std::vector<std::uint8_t>& B, int a, int b) {
  std::uint8_t x = B[a], y = B[b];
  if (x == y) return;
  if (x > y) std::swap(x, y);
  for (auto& v : B)
    if (v == y) v = x;
  B = canonical_blocks(std::move(B));
}

void enumerate_rec(const std::vector<int>& dom, int i, int rem, WalkCounter::LocalPerm& R,
                   std::vector<Transposition>& acc, std::vector<MonotoneWalk>& out) {
  const int n = static_cast<int>(R.size());
  int need = n - local_cycles(R);
  if (need > rem || (rem - need) % 2) return;
  if (i == n) {
    if (rem == 0) out.push_back({acc});
    return;
  }
  enumerate_rec(dom, i + 1, rem, R, acc, out);
  if (rem == 0) return;
  for (int a = 0; a < i; ++a) {
    std::swap(R[a], R[i]);  // R ∘ (a i)
    acc.emplace_back(dom[a], dom[i]);
    enumerate_rec(dom, i, rem - 1, R, acc, out);
    acc.pop_back();
    std::swap(R[a], R[i]);
  }
}

}  // namespace

std::vector<MonotoneWalk> enumerate_monotone_walks(const Permutation& target, int r) {
  if (r < 0) throw std::invalid_argument("walk length must be nonnegative");
  if (target.size() > 32) throw std::invalid_argument("label set too large for walk enumeration");
  std::vector<MonotoneWalk> out;
  auto R = to_local(target);
  std::vector<Transposition> acc;
  enumerate_rec(target.domain(), 0, r, R, acc, out);
  std::sort(out.begin(), out.end());
  return out;
}

mpz_class count_monotone_walks(const Permutation& target, int r) {
  if (r < 0) throw std::invalid_argument("walk length must be nonnegative");
  std::vector<int> all(target.size());
  std::iota(all.begin(), all.end(), 0);
  WalkCounter wc({all}, target.size());
  return wc.count({to_local(target)}, r);
}

std::vector<mpz_class> count_monotone_walks_upto(const Permutation& target, int R) {
  std::vector<int> all(target.size());
  std::iota(all.begin(), all.end(), 0);
  WalkCounter wc({all}, target.size());
  std::vector<mpz_class> out;
  auto t = to_local(target);
  for (int r = 0; r <= R; ++r) out.push_back(wc.count({t}, r));
  return out;
}

std::vector<int> orbit_blocks(const std::vector<Permutation>& generators, const std::vector<int>& I) {
  const int n = static_cast<int>(I.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : generators) {
    if (g.domain() != I) throw std::invalid_argument("generator domain differs from label set");
    for (int k = 0; k < n; ++k) {
      int a = find(k), b = find(g.index_of(g.images()[k]));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<int> blocks(n);
  std::vector<int> id(n, -1);
  int next = 0;
  for (int k = 0; k < n; ++k) {
    int root = find(k);
    if (id[root] < 0) id[root] = next++;
    blocks[k] = id[root];
  }
  return blocks;
}

bool is_transitive(const std::vector<Permutation>& generators, const std::vector<int>& I) {
  if (I.empty()) throw std::invalid_argument("is_transitive: empty label set");
  auto b = orbit_blocks(generators, I);
  return std::all_of(b.begin(), b.end(), [](int x) { return x == 0; });
}

mpz_class monotone_triple_hurwitz(const Permutation& rho, const Permutation& gamma,
                                  const Permutation& sigma, int r) {
  require_same_domain(rho, gamma);
  require_same_domain(rho, sigma);
  if (r < 0) return 0;
  const auto& I = rho.domain();
  std::vector<int> all(I.size());
  std::iota(all.begin(), all.end(), 0);
  auto blocks = orbit_blocks({rho, gamma, sigma}, I);
  std::vector<std::uint8_t> B(blocks.begin(), blocks.end());
  WalkCounter wc({all}, rho.size());
  return wc.count({to_local(compose(rho, compose(gamma, sigma)))}, r, B);
}

mpz_class monotone_hurwitz_by_genus(const Permutation& rho, const Permutation& gamma,
                                    const Permutation& sigma, int g) {
  int r = gamma.num_cycles() + rho.num_cycles() + sigma.num_cycles() - rho.size() - 2 + 2 * g;
  if (r < 0) return 0;
  return monotone_triple_hurwitz(rho, gamma, sigma, r);
}

// ---------------------------------------------------------------- WalkCounter

struct WalkCounter::Frame {
  const std::vector<LocalPerm>* targets;
  std::vector<int> later_need;   // Σ_{c' > c} (size − cycles)
  std::vector<std::string> later_key;
  bool transitive;
};

WalkCounter::WalkCounter(std::vector<std::vector<int>> classes, int n_global)
    : classes_(std::move(classes)), n_(n_global) {
  if (n_ > 255) throw std::invalid_argument("too many labels for walk counting");
  for (const auto& c : classes_)
    if (c.size() > 31) throw std::invalid_argument("color class too large for walk counting");
}

mpz_class WalkCounter::count(const std::vector<LocalPerm>& targets, int r,
                             const std::vector<std::uint8_t>& initial_blocks) {
  if (targets.size() != classes_.size()) throw std::invalid_argument("one target per color class required");
  for (size_t c = 0; c < targets.size(); ++c)
    if (targets[c].size() != classes_[c].size()) throw std::invalid_argument("target size mismatch");
  if (r < 0) return 0;
  Frame f;
  f.targets = &targets;
  f.transitive = !initial_blocks.empty();
  const size_t nc = classes_.size();
  f.later_need.assign(nc + 1, 0);
  f.later_key.assign(nc + 1, std::string());
  for (size_t c = nc; c-- > 0;) {
    f.later_need[c] = f.later_need[c + 1] + (c + 1 < nc ? static_cast<int>(targets[c + 1].size()) - local_cycles(targets[c + 1]) : 0);
    f.later_key[c] = f.later_key[c + 1];
    if (c + 1 < nc) f.later_key[c].append(targets[c + 1].begin(), targets[c + 1].end());
  }
  if (nc == 0) return (r == 0 && (!f.transitive || single_block(canonical_blocks(initial_blocks)))) ? 1 : 0;
  LocalPerm R = targets[0];
  std::vector<std::uint8_t> B = f.transitive ? canonical_blocks(initial_blocks) : std::vector<std::uint8_t>{};
  if (f.transitive && static_cast<int>(B.size()) != n_) throw std::invalid_argument("initial partition size mismatch");
  return rec(f, 0, 0, r, R, B);
}

mpz_class WalkCounter::rec(const Frame& f, int c, int i, int rem, LocalPerm& R, std::vector<std::uint8_t>& B) {
  const int nc = static_cast<int>(classes_.size());
  const int k = static_cast<int>(R.size());
  int need = k - local_cycles(R) + f.later_need[c];
  if (need > rem || (rem - need) % 2) return 0;
  if (i == k) {
    if (c + 1 == nc) return (rem == 0 && (!f.transitive || single_block(B))) ? 1 : 0;
    LocalPerm next = (*f.targets)[c + 1];
    return rec(f, c + 1, 0, rem, next, B);
  }
  std::string key;
  key.reserve(8 + R.size() + B.size() + f.later_key[c].size());
  key.push_back(static_cast<char>(c));
  key.push_back(static_cast<char>(i));
  key.push_back(static_cast<char>(rem & 0xff));
  key.push_back(static_cast<char>(rem >> 8));
  key.append(R.begin(), R.end());
  key.push_back('|');
  key.append(B.begin(), B.end());
  key.push_back('|');
  key += f.later_key[c];
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  mpz_class total = rec(f, c, i + 1, rem, R, B);
  if (rem > 0) {
    const auto& cls = classes_[c];
    for (int a = 0; a < i; ++a) {
      std::swap(R[a], R[i]);
      if (f.transitive) {
        auto B2 = B;
        merge_blocks(B2, cls[a], cls[i]);
        total += rec(f, c, i, rem - 1, R, B2);
      } else {
        total += rec(f, c, i, rem - 1, R, B);
      }
      std::swap(R[a], R[i]);
    }
  }
  memo_.emplace(std::move(key), total);
  return total;
}

}  // namespace umap
