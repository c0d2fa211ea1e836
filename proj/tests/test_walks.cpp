#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>

#include "umap/walks.hpp"

using namespace umap;

namespace {

// All weakly monotone transposition sequences of length r on {1..n}, listed directly.
std::vector<std::vector<std::pair<int, int>>> all_monotone_sequences(int n, int r) {
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<std::pair<int, int>> cur;
  std::function<void(int)> go = [&](int jmin) {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int j = jmin; j <= n; ++j)
      for (int i = 1; i < j; ++i) {
        cur.push_back({i, j});
        go(j);
        cur.pop_back();
      }
  };
  go(2);
  return out;
}

// τ_r ··· τ₁ as a one-line image vector on {1..n}
std::vector<int> product_of(const std::vector<std::pair<int, int>>& seq, int n) {
  std::vector<int> img(n + 1);
  std::iota(img.begin(), img.end(), 0);
  for (auto [i, j] : seq)
    for (int x = 1; x <= n; ++x) {
      if (img[x] == i) img[x] = j;
      else if (img[x] == j) img[x] = i;
    }
  return img;
}

long brute_walk_count(const Permutation& target, int r) {
  int n = target.size();
  long c = 0;
  for (const auto& seq : all_monotone_sequences(n, r)) {
    auto img = product_of(seq, n);
    bool ok = true;
    for (int x = 1; x <= n; ++x) ok = ok && img[x] == target(x);
    c += ok;
  }
  return c;
}

int find(std::vector<int>& p, int x) { return p[x] == x ? x : p[x] = find(p, p[x]); }

long brute_triple_hurwitz(const Permutation& rho, const Permutation& gamma, const Permutation& sigma, int r) {
  int n = rho.size();
  auto target = compose(rho, compose(gamma, sigma));
  long c = 0;
  for (const auto& seq : all_monotone_sequences(n, r)) {
    auto img = product_of(seq, n);
    bool ok = true;
    for (int x = 1; x <= n; ++x) ok = ok && img[x] == target(x);
    if (!ok) continue;
    std::vector<int> p(n + 1);
    std::iota(p.begin(), p.end(), 0);
    for (int x = 1; x <= n; ++x)
      for (const auto* s : {&rho, &gamma, &sigma}) p[find(p, x)] = find(p, (*s)(x));
    for (auto [i, j] : seq) p[find(p, i)] = find(p, j);
    int roots = 0;
    for (int x = 1; x <= n; ++x) roots += find(p, x) == x;
    c += roots == 1;
  }
  return c;
}

Permutation random_perm(std::mt19937& rng, int n) {
  std::vector<int> img = iota_labels(n);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation::from_images(iota_labels(n), img);
}

}  // namespace

TEST_CASE("walk enumeration examples") {
  auto w0 = enumerate_monotone_walks(Permutation::identity_n(1), 0);
  REQUIRE(w0.size() == 1);
  CHECK(w0[0].length() == 0);

  auto w1 = enumerate_monotone_walks(Permutation::parse_n("(1 2)", 2), 1);
  REQUIRE(w1.size() == 1);
  CHECK(w1[0].steps[0] == Transposition(1, 2));

  auto w2 = enumerate_monotone_walks(Permutation::identity_n(3), 2);
  REQUIRE(w2.size() == 3);
  CHECK(w2[0].steps == std::vector<Transposition>{{1, 2}, {1, 2}});
  CHECK(w2[1].steps == std::vector<Transposition>{{1, 3}, {1, 3}});
  CHECK(w2[2].steps == std::vector<Transposition>{{2, 3}, {2, 3}});
  for (const auto& w : w2) {
    CHECK(w.is_monotone());
    CHECK(w.product(iota_labels(3)).is_identity());
  }
}

TEST_CASE("walk counts") {
  CHECK(count_monotone_walks(Permutation::identity_n(1), 0) == 1);
  for (int r = 0; r < 8; ++r) CHECK(count_monotone_walks(Permutation::identity_n(2), r) == (r % 2 == 0 ? 1 : 0));
  CHECK(count_monotone_walks(Permutation::identity_n(3), 2) == 3);

  std::mt19937 rng(3);
  for (int n = 1; n <= 5; ++n)
    for (int t = 0; t < 4; ++t) {
      auto target = random_perm(rng, n);
      auto upto = count_monotone_walks_upto(target, 5);
      for (int r = 0; r <= 5; ++r) {
        CAPTURE(target.str());
        CAPTURE(r);
        long b = brute_walk_count(target, r);
        CHECK(count_monotone_walks(target, r) == b);
        CHECK(upto[r] == b);
        CHECK(static_cast<long>(enumerate_monotone_walks(target, r).size()) == b);
        // a product of r transpositions has the parity of r
        if ((n - target.num_cycles() + r) % 2) CHECK(b == 0);
      }
    }
}

TEST_CASE("walk counts are class functions") {
  std::mt19937 rng(8);
  for (int t = 0; t < 10; ++t) {
    auto s = random_perm(rng, 5), g = random_perm(rng, 5);
    for (int r = 0; r <= 6; ++r) CHECK(count_monotone_walks(s, r) == count_monotone_walks(conjugate(s, g), r));
  }
}

TEST_CASE("transitivity") {
  CHECK(is_transitive({Permutation::parse_n("(1 2)", 3), Permutation::parse_n("(2 3)", 3)}, {1, 2, 3}));
  CHECK_FALSE(is_transitive({Permutation::parse_n("(1 2)", 3)}, {1, 2, 3}));
  CHECK(is_transitive({}, {1}));
}

TEST_CASE("monotone triple Hurwitz numbers") {
  auto id1 = Permutation::identity_n(1);
  CHECK(monotone_triple_hurwitz(id1, id1, id1, 0) == 1);
  CHECK(monotone_hurwitz_by_genus(id1, id1, id1, 0) == 1);
  auto id2 = Permutation::identity_n(2);
  CHECK(monotone_triple_hurwitz(id2, id2, id2, 0) == 0);
  CHECK(monotone_triple_hurwitz(id2, id2, id2, 2) == 1);
  CHECK(monotone_hurwitz_by_genus(id2, id2, id2, 0) == 1);
  auto sw = Permutation::parse_n("(1 2)", 2);
  CHECK(monotone_triple_hurwitz(sw, sw, id2, 0) == 1);
  CHECK(monotone_triple_hurwitz(id2, id2, id2, -1) == 0);

  std::mt19937 rng(21);
  for (int n = 1; n <= 4; ++n)
    for (int t = 0; t < 6; ++t) {
      auto a = random_perm(rng, n), b = random_perm(rng, n), c = random_perm(rng, n);
      for (int r = 0; r <= 4; ++r) CHECK(monotone_triple_hurwitz(a, b, c, r) == brute_triple_hurwitz(a, b, c, r));
    }
}
