#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "umap/expansion.hpp"
#include "umap/oracle.hpp"
#include "umap/weingarten.hpp"

using namespace umap;

namespace {

using cd = std::complex<double>;

Tuple T(std::initializer_list<const char*> words) {
  Tuple out;
  for (const char* w : words) out.push_back(parse_word(w));
  return out;
}

std::vector<Permutation> all_perms(int q) {
  std::vector<Permutation> out;
  std::vector<int> img = iota_labels(q);
  do out.push_back(Permutation::from_images(iota_labels(q), img));
  while (std::next_permutation(img.begin(), img.end()));
  return out;
}

// E[Tr P₁ ⋯ Tr P_l] by summing over every matrix index and integrating each monomial in
// the unitary entries with the Weingarten formula, one color at a time.
cd moment_by_index_sum(const Tuple& P, const MatrixMap& A, int N) {
  struct Slot {
    int word, pos;
  };
  std::vector<Slot> slots;
  for (int w = 0; w < static_cast<int>(P.size()); ++w)
    for (int k = 0; k < static_cast<int>(P[w].size()); ++k) slots.push_back({w, k});
  const int L = static_cast<int>(slots.size());
  // letter at slot s maps index[s] to index[next(s)]
  std::vector<int> next(L);
  for (int s = 0; s < L; ++s) {
    int len = static_cast<int>(P[slots[s].word].size());
    next[s] = s - slots[s].pos + (slots[s].pos + 1) % len;
  }
  std::map<int, int> q;
  for (const auto& w : P)
    for (const Letter& x : w)
      if (x.kind == LetterKind::unitary) q[x.index]++;
  std::map<int, std::vector<Permutation>> perms;
  std::map<int, std::map<Permutation, double>> wg;
  for (auto [c, qc] : q) {
    perms[c] = all_perms(qc);
    for (const auto& p : perms[c]) wg[c][p] = weingarten_exact(p, N).get_d();
  }

  std::vector<int> idx(L, 0);
  cd total = 0;
  for (;;) {
    cd det = 1;
    std::map<int, std::vector<std::pair<int, int>>> U, Ubar;  // (row, col) of U and of conj(U)
    for (int s = 0; s < L && det != cd(0); ++s) {
      const Letter& x = P[slots[s].word][slots[s].pos];
      int a = idx[s], b = idx[next[s]];
      switch (x.kind) {
        case LetterKind::det: det *= A.at(x.index)(a, b); break;
        case LetterKind::det_adj: det *= std::conj(A.at(x.index)(b, a)); break;
        case LetterKind::unitary: U[x.index].push_back({a, b}); break;
        case LetterKind::unitary_inv: Ubar[x.index].push_back({b, a}); break;
      }
    }
    if (det != cd(0)) {
      double integral = 1;
      for (auto [c, qc] : q) {
        const auto& u = U[c];
        const auto& v = Ubar[c];
        if (static_cast<int>(v.size()) != qc) {
          integral = 0;
          break;
        }
        double sum = 0;
        for (const auto& s : perms[c]) {
          bool rows = true;
          for (int k = 0; k < qc; ++k) rows = rows && u[k].first == v[s(k + 1) - 1].first;
          if (!rows) continue;
          for (const auto& t : perms[c]) {
            bool cols = true;
            for (int k = 0; k < qc; ++k) cols = cols && u[k].second == v[t(k + 1) - 1].second;
            if (cols) sum += wg[c].at(compose(t, s.inverse()));
          }
        }
        integral *= sum;
      }
      // unbalanced colors with no u at all
      for (const auto& [c, v] : Ubar)
        if (!q.count(c) && !v.empty()) integral = 0;
      total += det * integral;
    }
    int s = 0;
    while (s < L && ++idx[s] == N) idx[s++] = 0;
    if (s == L) break;
  }
  return total;
}

std::map<int, ExactMatrix> rational_matrices() {
  auto M = [](long a, long b, long c, long d) { return ExactMatrix{{CQ(a), CQ(b)}, {CQ(c), CQ(d)}}; };
  return {{1, M(1, 2, 0, -1)}, {2, M(0, 1, 1, 3)}, {3, M(2, 0, -1, 1)}, {4, M(1, -1, 1, 2)}};
}

}  // namespace

TEST_CASE("moment examples") {
  TraceExpr e;
  e.add({parse_word("a1"), parse_word("a2")}, CQ(4));
  CHECK(moment_haar(T({"a1 u1 a2 u1^-1"}), 4) == e);
  CHECK(moment_haar(T({"u1", "u1^-1"}), 3) == TraceExpr::constant(CQ(1)));
  CHECK(moment_haar(T({"u1"}), 3).is_zero());
  CHECK(moment_haar(T({"a1 u1 u1"}), 3).is_zero());
}

TEST_CASE("moments agree with a direct index-sum integral") {
  const int N = 2;
  MatrixTuple A = seeded_contractions(N, {1, 2, 3, 4}, 99);
  for (const Tuple& P : {T({"a1 u1 a2 u1^-1"}), T({"u1 a1 u1^-1 a2"}), T({"u1", "a1 u1^-1"}),
                         T({"a1 u1 a2 u1^-1 u1 a3 u1^-1"}), T({"u1 a1 u1 a2 u1^-1 a3 u1^-1"}),
                         T({"u1 a1 u2", "u1^-1 u2^-1 a2"}), T({"u1 u2 a1 u1^-1 u2^-1"}), T({"a1 u1 a2 u1", "a3 u1^-1 u1^-1"}),
                         T({"u1 a1* u1^-1", "u2 a2 u2^-1 a3"})}) {
    CAPTURE(format_word(P[0]));
    cd exact = evaluate_trace_expression(moment_haar(P, N), A.A, N);
    cd direct = moment_by_index_sum(P, A.A, N);
    CHECK(std::abs(exact - direct) < 1e-12);
  }
}

TEST_CASE("set partitions") {
  const long bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (int n = 0; n <= 6; ++n) CHECK(static_cast<long>(set_partitions(n).size()) == bell[n]);
  for (const auto& rgs : set_partitions(4)) {
    CHECK(rgs[0] == 0);
    int mx = 0;
    for (int b : rgs) {
      CHECK(b <= mx + 1);
      mx = std::max(mx, b);
    }
  }
}

TEST_CASE("cumulants from moments") {
  std::mt19937 rng(1);
  std::normal_distribution<double> nd;
  std::vector<std::array<double, 3>> data(50);
  for (auto& row : data) row = {nd(rng), nd(rng), nd(rng)};
  auto m = [&](const std::vector<int>& idx) {
    double s = 0;
    for (const auto& row : data) {
      double p = 1;
      for (int k : idx) p *= row[k];
      s += p;
    }
    return s / data.size();
  };
  std::function<double(const std::vector<int>&)> moment = m;
  double m1 = m({0}), m2 = m({1}), m3 = m({2});
  CHECK(cumulant_from_moments<double>(1, moment) == doctest::Approx(m1));
  CHECK(cumulant_from_moments<double>(2, moment) == doctest::Approx(m({0, 1}) - m1 * m2));
  double c3 = m({0, 1, 2}) - m({0, 1}) * m3 - m({0, 2}) * m2 - m({1, 2}) * m1 + 2 * m1 * m2 * m3;
  CHECK(cumulant_from_moments<double>(3, moment) == doctest::Approx(c3));
}

TEST_CASE("genus-zero coefficients") {
  TraceExpr e;
  e.add({parse_word("a1"), parse_word("a2")}, CQ(1));
  CHECK(genus_coefficient(0, T({"a1 u1 a2 u1^-1"})) == e);
  CHECK(genus_coefficient(0, T({"a1 u1"})).is_zero());
  CHECK(genus_coefficient(0, T({"a1 u1^-1"})).is_zero());
  CHECK(genus_coefficient(0, T({"a1"})) == TraceExpr::tr(parse_word("a1")));
  CHECK(genus_coefficient(1, T({"a1"})).is_zero());
  CHECK(genus_coefficient(0, T({"u1", "u1^-1"})) == TraceExpr::constant(CQ(1)));
}

TEST_CASE("genus coefficients agree with map enumeration") {
  for (const Tuple& P : {T({"a1 u1 a2 u1^-1 a3 u1 a4 u1^-1"}), T({"u1 a1 u1 a2 u1^-1 a3 u1^-1"}),
                         T({"a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1"}), T({"u1 a1 u2", "a2 u1^-1 u2^-1"}),
                         T({"u1", "u1", "u1^-1 a1 u1^-1"}), T({"a1 u1 a2 u1^-1 a3 u1 a4 u1^-1 a5 u1 a6 u1^-1"})})
    for (int g = 0; g <= 1; ++g) {
      CAPTURE(g);
      CHECK(genus_coefficient(g, P) == genus_coefficient_by_enumeration(g, P));
    }
}

TEST_CASE("the genus series approximates the cumulant") {
  auto A = rational_matrices();
  Tuple P = T({"a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1"});
  CQ m0 = evaluate_exact(genus_coefficient(0, P), A), m1 = evaluate_exact(genus_coefficient(1, P), A);
  double prev = 1e300;
  for (int N : {6, 12, 24}) {
    CQ c = evaluate_exact(cumulant_haar(P, N), A);  // l = 2, so N^{l−2} = 1
    mpq_class res = (c - m0 - m1 * CQ(mpq_class(1, N * N))).abs_bound();
    CHECK(res.get_d() < prev / 8);
    prev = res.get_d();
  }
}

TEST_CASE("formal cumulants") {
  Potential V{{parse_word("a1 u1 a2 u1^-1")}};
  Tuple P = T({"a3 u1 a4 u1^-1"});
  auto F = formal_cumulant(0, P, V, 2);
  CHECK(F.coefficients.at({0}) == genus_coefficient(0, P));
  CHECK(F.coefficients.at({1}) == genus_coefficient_by_enumeration(0, T({"a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1"})));
  TraceExpr half = genus_coefficient(0, T({"a1 u1 a2 u1^-1", "a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1"})) *
                   CQ(mpq_class(1, 2));
  CHECK(F.coefficients.at({2}) == half);

  Potential odd{{parse_word("a1 u1^-1")}};
  auto G = formal_cumulant(0, T({"u1 a2 u1"}), odd, 3);
  for (const auto& [n, c] : G.coefficients)
    if (n[0] % 2 == 1) CHECK(c.is_zero());
  CHECK_FALSE(G.coefficients.at({2}).is_zero());
}

TEST_CASE("Tutte identities") {
  CHECK(tutte_check(0, T({"a1 u1 a2 u1"}), 1).equal());
  CHECK(tutte_recursion_check(0, T({"a1 u1 a2 u1"})).equal());
  CHECK(tutte_check(0, T({"a1 u1 a2 u1^-1"}), 1).equal());
  CHECK(tutte_check(1, T({"a1 u1 a2 u1^-1 a3 u1", "a4 u1^-1 a5 u1 a6 u1^-1"}), 1).equal());
  CHECK(tutte_recursion_check(1, T({"a1 u1^-1 a2 u1^-1", "a3 u1 a4 u1^-1 a5 u1"})).equal());
  auto mixed = T({"a1 u1 a2 u2^-1", "a3 u2 a4 u1^-1"});
  CHECK(tutte_check(0, mixed, 1).equal());
  CHECK(tutte_check(0, mixed, 2).equal());
  CHECK_THROWS(tutte_recursion_check(0, T({"a1 u1 a2 u1^-1"})));
}

TEST_CASE("Hurwitz reduction on alternated tuples") {
  CHECK(is_alternated(parse_word("a1 u1 a2 u1^-1")));
  CHECK(is_alternated(parse_word("u1 u1^-1 a1 u1 a2 u1^-1")));
  CHECK_FALSE(is_alternated(parse_word("a1 u1 a2 u1")));
  TraceExpr e;
  e.add({parse_word("a1"), parse_word("a2")}, CQ(1));
  CHECK(hurwitz_reduction(0, T({"a1 u1 a2 u1^-1"})) == e);
  for (const Tuple& P : {T({"a1 u1 a2 u1^-1 a3 u1 a4 u1^-1"}), T({"a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1"}),
                         T({"u1 a1 u1^-1 a2 u1 a3 u1^-1 a4"})})
    for (int g = 0; g <= 1; ++g) CHECK(hurwitz_reduction(g, P) == genus_coefficient(g, P));
  CHECK_THROWS(hurwitz_reduction(0, T({"a1 u1 a2 u1"})));
}

TEST_CASE("bounds") {
  Potential none;
  auto r = bounds_check(0, T({"a1 u1 a2 u1^-1"}), none, {});
  CHECK(r.lhs == 1);
  CHECK(r.holds());
  CHECK(catalan(0) == 1);
  CHECK(catalan(5) == 42);
  auto b = bound_constants(1, 2);
  CHECK(b.B == 48);
  CHECK(b.A.get_d() == doctest::Approx(std::sqrt(6.0) * std::pow(M_PI, 0.25) * 16).epsilon(1e-9));
  CHECK(radius_RV(1, 2) > 0);
}

TEST_CASE("appendix operators") {
  CHECK(master_operator_check(parse_word("u1"), parse_word("u1")).equal());
  CHECK(master_operator_check(parse_word("a1 u1^-1"), parse_word("u1 a2 u1")).equal());
  CHECK_THROWS(master_operator_check(parse_word("u1"), parse_word("a1")));

  auto tau = [](const Word& w) { return w.empty() ? cd(1) : cd(0); };
  auto rep = operator_norm_bound_check(tau, 1, 2, 4, Poly(parse_word("a1 a2")));
  CHECK(rep.lhs == 0);
  CHECK(rep.holds());
  CHECK(operator_norm_bound_check(tau, 1, 2, 4, Poly(parse_word("u1 a1 u1^-1 u1"))).holds());
  CHECK_THROWS(operator_norm_bound_check(tau, 1, 4, 2, Poly(parse_word("u1"))));
}
