#include <doctest.h>

#include "umap/ncpoly.hpp"

using namespace umap;

namespace {

Word W(const char* s) { return std::string(s).empty() ? Word{} : parse_word(s); }

// Δ written out by slicing P at every unitary letter and then P₂P₁ at every unitary letter.
Tensor laplacian_by_splittings(const Word& P, int color) {
  const Letter u = Letter::u(color), ui = Letter::uinv(color);
  Tensor out;
  for (size_t k = 0; k < P.size(); ++k) {
    int outer = P[k] == u ? 1 : P[k] == ui ? -1 : 0;
    if (!outer) continue;
    Word P1(P.begin(), P.begin() + k), P2(P.begin() + k + 1, P.end());
    Word P21 = P2;
    P21.insert(P21.end(), P1.begin(), P1.end());
    for (size_t t = 0; t < P21.size(); ++t) {
      Word Q1(P21.begin(), P21.begin() + t), Q2(P21.begin() + t + 1, P21.end());
      bool inner_u = P21[t] == u, inner_ui = P21[t] == ui;
      if (!inner_u && !inner_ui) continue;
      if (outer == 1 && inner_u) {
        Word l = Q1, r = Q2;
        l.push_back(u);
        r.push_back(u);
        out.add(l, r, CQ(1));
      } else if (outer == 1) {
        out.add(Q1, Q2, CQ(-1));
      } else if (inner_u) {
        out.add(Q1, Q2, CQ(-1));
      } else {
        Word l{ui}, r{ui};
        l.insert(l.end(), Q1.begin(), Q1.end());
        r.insert(r.end(), Q2.begin(), Q2.end());
        out.add(l, r, CQ(1));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("word parsing") {
  Word w = parse_word("a1 u1 a2 u1^-1");
  REQUIRE(w.size() == 4);
  CHECK(w[0] == Letter::a(1));
  CHECK(w[1] == Letter::u(1));
  CHECK(w[3] == Letter::uinv(1));
  CHECK(parse_word("a1*") == Word{Letter::astar(1)});
  CHECK(parse_word("u1") == Word{Letter::u(1)});
  for (const char* s : {"a1 u1 a2 u1^-1", "u2 a3* u1^-1 a1", "u1"}) CHECK(format_word(parse_word(s)) == s);
  CHECK(format_word(Word{}) == "1");
  CHECK_THROWS(parse_word("b1"));
}

TEST_CASE("degrees and adjoints") {
  Word w = parse_word("a1 u1 a2 u1^-1 u2");
  CHECK(degree(w) == 3);
  CHECK(degree(w, 1) == 2);
  CHECK(degree_plus(w, 1) == 1);
  CHECK(degree_minus(w, 1) == 1);
  CHECK(colors_of(w) == std::vector<int>{1, 2});
  CHECK(adjoint(w) == parse_word("u2^-1 u1 a2* u1^-1 a1*"));
  CHECK(adjoint(adjoint(w)) == w);
  CHECK(rotate(w, 2) == parse_word("a2 u1^-1 u2 a1 u1"));
}

TEST_CASE("decompose reads M u^eps blocks") {
  auto d = decompose(parse_word("a1 u1 a2 u1^-1"));
  CHECK(d.M == std::vector<Word>{W("a1"), W("a2")});
  CHECK(d.eps == std::vector<int>{1, -1});
  CHECK(d.colors == std::vector<int>{1, 1});

  d = decompose(parse_word("u1 u1^-1"));
  CHECK(d.M == std::vector<Word>{Word{}, Word{}});
  CHECK(d.eps == std::vector<int>{1, -1});

  d = decompose(parse_word("a1 u2"));
  CHECK(d.M == std::vector<Word>{W("a1")});
  CHECK(d.colors == std::vector<int>{2});

  Word w = parse_word("a3 a1* u2^-1 u1 a2 u2");
  CHECK(reassemble(decompose(w)) == w);
  CHECK_THROWS(decompose(parse_word("u1 a1")));
}

TEST_CASE("gamma_of_tuple") {
  CHECK(gamma_of_tuple({W("u1 a1 u1^-1"), W("a2 u1")}).str() == "(1 2)");
  CHECK(gamma_of_tuple({W("u1 u1^-1"), W("u1 u1^-1")}) == Permutation::parse_n("(1 2)(3 4)", 4));
  CHECK(gamma_of_tuple({W("u1 u1 u1^-1 u1^-1")}) == Permutation::parse_n("(1 2 3 4)", 4));
  CHECK(gamma_of_tuple({W("u1"), W("u1 u1^-1 u1^-1")}) == Permutation::parse_n("(2 3 4)", 4));
}

TEST_CASE("non-commutative derivative") {
  Tensor t;
  t.add(W("u1"), Word{}, CQ(1));
  CHECK(nc_derivative(Poly(W("u1")), 1) == t);

  t = Tensor();
  t.add(Word{}, W("u1^-1"), CQ(-1));
  CHECK(nc_derivative(Poly(W("u1^-1")), 1) == t);

  t = Tensor();
  t.add(W("a1 u1"), W("a2 u1^-1"), CQ(1));
  t.add(W("a1 u1 a2"), W("u1^-1"), CQ(-1));
  CHECK(nc_derivative(Poly(W("a1 u1 a2 u1^-1")), 1) == t);
  CHECK(nc_derivative(Poly(W("a1 u1 a2 u1^-1")), 2).is_zero());
}

TEST_CASE("cyclic derivative") {
  CHECK(cyclic_derivative(Poly(W("u1")), 1) == Poly(W("u1")));
  CHECK(cyclic_derivative(Poly(W("a1")), 1).is_zero());
  Poly expect = Poly(W("a2 u1^-1 a1 u1")) - Poly(W("u1^-1 a1 u1 a2"));
  CHECK(cyclic_derivative(Poly(W("a1 u1 a2 u1^-1")), 1) == expect);
  // D only depends on the cyclic class of a monomial
  Word w = parse_word("a1 u1 a2 u2 u1^-1 a3 u1");
  for (int k = 0; k < static_cast<int>(w.size()); ++k) {
    CHECK(cyclic_derivative(Poly(rotate(w, k)), 1) == cyclic_derivative(Poly(w), 1));
    CHECK(cyclic_derivative(Poly(rotate(w, k)), 2) == cyclic_derivative(Poly(w), 2));
  }
}

TEST_CASE("reduced Laplacian") {
  CHECK(reduced_laplacian(W("u1"), 1).is_zero());
  CHECK(reduced_laplacian(W("a1"), 1).is_zero());
  Tensor t;
  t.add(Word{}, Word{}, CQ(-2));
  CHECK(reduced_laplacian(W("u1 u1^-1"), 1) == t);
  for (const char* s : {"u1 u1", "a1 u1 a2 u1^-1 u1", "u1^-1 a1 u2 u1^-1 a2 u1", "u1 a1 u1 u1^-1 a2 u1^-1"}) {
    CAPTURE(s);
    CHECK(reduced_laplacian(W(s), 1) == laplacian_by_splittings(W(s), 1));
  }
}

TEST_CASE("xi norm") {
  CHECK(xi_norm(Poly(W("a1")), 3) == 1);
  CHECK(xi_norm(Poly(W("u1 u1^-1")), mpq_class(5, 2)) == mpq_class(25, 4));
  Poly V = Poly(W("u1 a1 u1^-1"), CQ(mpq_class(1, 3))) + Poly(W("u1 u1^-1 u1 u1^-1"), CQ(0, -2));
  CHECK(xi_norm(V, 1) == mpq_class(7, 3));
  CHECK(xi_norm(V, 2) == mpq_class(4, 3) + 32);
  CHECK_THROWS(xi_norm(V, mpq_class(1, 2)));
}

TEST_CASE("polynomial arithmetic") {
  Poly p = Poly::parse("2 * a1 u1 + 1/2 * u1^-1");
  Poly q = Poly(W("a1 u1"), CQ(2)) + Poly(W("u1^-1"), CQ(mpq_class(1, 2)));
  CHECK(p == q);
  CHECK((p - q).is_zero());
  CHECK((p * Poly(W("u1"))).terms().size() == 2);
  CHECK(p.adjoint().adjoint() == p);
}

TEST_CASE("trace of a permutation") {
  auto id = Permutation::identity_n(2);
  auto sw = Permutation::parse_n("(1 2)", 2);
  TraceExpr e;
  e.add({W("a1"), W("a2")}, CQ(1));
  CHECK(trace_of_permutation(id, {W("a1"), W("a2")}) == e);
  CHECK(trace_of_permutation(sw, {W("a1"), W("a2")}) == TraceExpr::tr(W("a1 a2")));
  CHECK(trace_of_permutation(sw, {Word{}, Word{}}) == TraceExpr::constant(CQ(1)));
  // cyclic words are canonical, so the order along the cycle does not matter
  CHECK(TraceExpr::tr(W("a2 a1 a3")) == TraceExpr::tr(W("a1 a3 a2")));
}

TEST_CASE("evaluating trace expressions") {
  const int N = 2;
  MatrixMap A;
  A[1] = Eigen::MatrixXcd::Zero(N, N);
  A[2] = Eigen::MatrixXcd::Zero(N, N);
  A[1](0, 0) = 1;
  A[2](1, 1) = 1;
  TraceExpr e;
  e.add({W("a1"), W("a2")}, CQ(1));
  CHECK(std::abs(evaluate_trace_expression(e, A, N) - 0.25) < 1e-15);
  CHECK(std::abs(evaluate_trace_expression(TraceExpr::tr(W("a1 a2")), A, N)) < 1e-15);
  CHECK(std::abs(evaluate_trace_expression(TraceExpr::tr(W("a1")), {{1, Eigen::MatrixXcd::Identity(3, 3)}}, 3) - 1.0) < 1e-15);
  CHECK(evaluate_trace_expression(TraceExpr(), A, N) == std::complex<double>(0));
}
