#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "umap/maps.hpp"

using namespace umap;

namespace {

UnitaryTypeMap worked_example_map() {
  return build_map(Permutation::parse_n("(1 4 3 7)(5 6)(2 8)", 8), SignVector::parse("++--++--"),
                   Permutation::parse_n("(1 7 6 8 2 4)(3 5)", 8), MonotoneWalk{{{1, 2}, {2, 6}}});
}

int find(std::vector<int>& p, int x) { return p[x] == x ? x : p[x] = find(p, p[x]); }

// Nondecreasing single-color maps counted straight from the definition: filter S_n by sign
// compatibility, then list all monotone walks on the plus set and test transitivity.
long brute_map_count(const SignVector& eps, const Permutation& rho, int r, bool connected) {
  const int n = rho.size();
  auto plus = eps.plus_set();
  const int k = static_cast<int>(plus.size());
  std::vector<std::vector<std::pair<int, int>>> seqs;
  std::vector<std::pair<int, int>> cur;
  std::function<void(int)> go = [&](int jmin) {
    if (static_cast<int>(cur.size()) == r) {
      seqs.push_back(cur);
      return;
    }
    for (int j = jmin; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        cur.push_back({plus[i], plus[j]});
        go(j);
        cur.pop_back();
      }
  };
  go(1);

  long count = 0;
  std::vector<int> img = iota_labels(n);
  do {
    bool ok = true;
    for (int x = 1; x <= n; ++x) ok = ok && eps(img[x - 1]) == -eps(x);
    if (!ok) continue;
    auto pi = [&](int x) { return img[x - 1]; };
    for (const auto& seq : seqs) {
      std::vector<int> t(n + 1);
      std::iota(t.begin(), t.end(), 0);
      for (auto [i, j] : seq)
        for (int x : plus) {
          if (t[x] == i) t[x] = j;
          else if (t[x] == j) t[x] = i;
        }
      bool match = true;
      for (int x : plus) match = match && t[x] == pi(pi(x));
      if (!match) continue;
      if (connected) {
        std::vector<int> p(n + 1);
        std::iota(p.begin(), p.end(), 0);
        for (int x = 1; x <= n; ++x) {
          p[find(p, x)] = find(p, rho(x));
          p[find(p, x)] = find(p, pi(x));
        }
        for (auto [i, j] : seq) p[find(p, i)] = find(p, j);
        int roots = 0;
        for (int x = 1; x <= n; ++x) roots += find(p, x) == x;
        if (roots != 1) continue;
      }
      ++count;
    }
  } while (std::next_permutation(img.begin(), img.end()));
  return count;
}

int total_genus(const std::vector<UnitaryTypeMap>& parts) {
  int g = 0;
  for (const auto& p : parts) g += diagnostics(p).genus;
  return g;
}

int total_phi_cycles(const std::vector<UnitaryTypeMap>& parts) {
  int c = 0;
  for (const auto& p : parts) c += diagnostics(p).phi.num_cycles();
  return c;
}

}  // namespace

TEST_CASE("the worked example map") {
  auto map = worked_example_map();
  auto d = diagnostics(map);
  CHECK(d.phi == Permutation::parse_n("(3 6)(4 8 5)", 8));
  CHECK(d.phi.num_cycles() == 5);
  CHECK(d.phi == compose(map.rho.inverse(), map.pi.inverse()));
  CHECK(d.genus == 0);
  CHECK(d.connected);
  CHECK(d.nondecreasing);
  CHECK(map.black_count() == 2);

  auto E = build_embedded(map);
  CHECK(to_perm_data(E) == map);
  CHECK(embedded_components(E) == 1);
  CHECK(embedded_euler_characteristic(E) == 2);
  // the outgoing half-edges of each black vertex carry the labels of its transposition
  auto lab = propagate_labels(E);
  std::map<int, std::vector<int>> out_labels;
  for (int h = 0; h < E.size(); ++h)
    if (E.half_edges[h].black && E.outgoing[h]) out_labels[E.half_edges[h].black].push_back(lab[h]);
  for (auto& [b, v] : out_labels) std::sort(v.begin(), v.end());
  CHECK(out_labels[1] == std::vector<int>{1, 2});
  CHECK(out_labels[2] == std::vector<int>{2, 6});
}

TEST_CASE("build_map validation") {
  auto one = build_map(Permutation::parse_n("(1 2)", 2), SignVector::parse("+-"), Permutation::parse_n("(1 2)", 2),
                       MonotoneWalk{});
  auto d = diagnostics(one);
  CHECK(d.genus == 0);
  CHECK(d.connected);
  CHECK(d.phi.num_cycles() == 2);

  auto rho = Permutation::parse_n("(1 4 3 7)(5 6)(2 8)", 8);
  auto eps = SignVector::parse("++--++--");
  auto pi = Permutation::parse_n("(1 7 6 8 2 4)(3 5)", 8);
  CHECK_THROWS_AS(build_map(rho, eps, pi, MonotoneWalk{{{2, 6}, {1, 2}}}), std::invalid_argument);
  CHECK_THROWS_AS(build_map(rho, eps, pi, MonotoneWalk{{{1, 2}}}), std::invalid_argument);
  CHECK_THROWS_AS(build_map(rho, eps, Permutation::parse_n("(1 2)", 8), MonotoneWalk{}), std::invalid_argument);
}

TEST_CASE("enumeration against a brute-force count") {
  CHECK(enumerate_maps({1, 2}, SignVector::parse("+-"), Permutation::parse_n("(1 2)", 2), {1, 1},
                       {.r = 0}).size() == 1);
  CHECK(enumerate_maps({1, 2, 3}, SignVector::parse("+--"), Permutation::parse_n("(1 2 3)", 3), {1, 1, 1},
                       {.r = 0}).empty());

  struct Case {
    const char* eps;
    const char* rho;
  };
  for (Case c : {Case{"+-+-", "(1 2)(3 4)"}, Case{"+-+-", "(1 2 3 4)"}, Case{"++--", "(1 3)"},
                 Case{"+-+-+-", "(1 2)(3 4)(5 6)"}, Case{"++-+--", "(1 2 3)(4 5 6)"}}) {
    auto eps = SignVector::parse(c.eps);
    int n = static_cast<int>(eps.domain().size());
    auto rho = Permutation::parse_n(c.rho, n);
    for (int r = 0; r <= 2; ++r)
      for (bool conn : {false, true}) {
        CAPTURE(c.eps);
        CAPTURE(c.rho);
        CAPTURE(r);
        auto maps = enumerate_maps(iota_labels(n), eps, rho, std::vector<int>(n, 1), {.r = r, .connected_only = conn});
        CHECK(static_cast<long>(maps.size()) == brute_map_count(eps, rho, r, conn));
      }
  }
}

TEST_CASE("diagnostics agree with the embedded structure") {
  long seen = 0;
  for (const char* pm : {"+-+-", "++--", "+-+-+-", "+-+--+", "++-+--"}) {
    auto eps = SignVector::parse(pm);
    int n = static_cast<int>(eps.domain().size());
    for (const char* rs : {"()", "(1 2)(3 4)", "(1 2 3 4)", "(1 3)(2 4 5)", "(1 6)(2 5)(3 4)"}) {
      Permutation rho;
      try {
        rho = Permutation::parse_n(rs, n);
      } catch (const std::exception&) {
        continue;
      }
      for (int r = 0; r <= 3; ++r)
        for (const auto& map : enumerate_maps(iota_labels(n), eps, rho, std::vector<int>(n, 1), {.r = r})) {
          auto d = diagnostics(map);
          auto E = build_embedded(map);
          REQUIRE(to_perm_data(E) == map);
          CHECK(d.components == embedded_components(E));
          CHECK(d.connected == (embedded_components(E) == 1));
          CHECK(2 * d.components - 2 * d.genus == embedded_euler_characteristic(E));
          CHECK(d.genus >= 0);
          CHECK(2 * d.components - 2 * d.genus == map.rho.num_cycles() + d.phi.num_cycles() - map.m() - r);
          ++seen;
        }
    }
  }
  CHECK(seen > 100);
}

TEST_CASE("surgeries follow the case tables") {
  std::map<std::string, long> cases;
  for (const char* pm : {"-+-+", "+--+", "-++--+", "+-+--+", "+--+-+", "--++-+", "-+-+-+-+"}) {
    auto eps = SignVector::parse(pm);
    int n = static_cast<int>(eps.domain().size());
    for (const char* rs : {"()", "(1 2)(3 4)", "(1 2 3 4)", "(1 4)(2 3)", "(1 3)(2 4 5 6)", "(1 2 3 4 5 6)",
                           "(1 5)(2 6)(3 4)", "(1 2)(3 4)(5 6)(7 8)", "(1 3 5 7)(2 4 6 8)"}) {
      Permutation rho;
      try {
        rho = Permutation::parse_n(rs, n);
      } catch (const std::exception&) {
        continue;
      }
      for (int r = 0; r <= 3; ++r)
        for (const auto& map :
             enumerate_maps(iota_labels(n), eps, rho, std::vector<int>(n, 1), {.r = r, .connected_only = true})) {
          auto d = diagnostics(map);
          bool white = cut_white_applies(map);
          if (white) {
            CHECK_THROWS(cut_black(map));
            auto s = cut_white(map);
            cases["white " + std::to_string(s.case_id)]++;
            CHECK(s.j == map.pi(n));
            switch (s.case_id) {
              case 1:
                REQUIRE(s.parts.size() == 1);
                CHECK(diagnostics(s.parts[0]).genus == d.genus);
                CHECK(diagnostics(s.parts[0]).phi.num_cycles() == d.phi.num_cycles() - 1);
                break;
              case 2:
                REQUIRE(s.parts.size() == 1);
                CHECK(diagnostics(s.parts[0]).genus == d.genus - 1);
                break;
              case 3:
                REQUIRE(s.parts.size() == 2);
                CHECK(total_genus(s.parts) == d.genus);
                break;
              default:
                REQUIRE(s.parts.size() == 1);
                CHECK(diagnostics(s.parts[0]).genus == d.genus);
            }
          } else {
            CHECK_THROWS(cut_white(map));
            auto s = cut_black(map);
            cases["black " + std::to_string(s.case_id)]++;
            CHECK(total_phi_cycles(s.parts) == d.phi.num_cycles());
            if (s.case_id == 1) {
              REQUIRE(s.parts.size() == 2);
              CHECK(total_genus(s.parts) == d.genus);
            } else if (s.case_id == 2) {
              REQUIRE(s.parts.size() == 1);
              CHECK(diagnostics(s.parts[0]).genus == d.genus - 1);
            } else {
              REQUIRE(s.parts.size() == 1);
              CHECK(diagnostics(s.parts[0]).genus == d.genus);
            }
          }
        }
    }
  }
  // every branch of both tables is exercised
  for (std::string k : {"white 1", "white 2", "white 3", "white 4", "black 1", "black 2", "black 3"}) {
    CAPTURE(k);
    CHECK(cases[k] > 0);
  }
}
