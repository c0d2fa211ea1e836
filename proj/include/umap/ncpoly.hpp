#ifndef UMAP_NCPOLY_HPP
#define UMAP_NCPOLY_HPP

#include <gmpxx.h>

#include <Eigen/Dense>
#include <complex>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "umap/perm.hpp"

namespace umap {

enum class LetterKind : unsigned char { det = 0, det_adj = 1, unitary = 2, unitary_inv = 3 };

struct Letter {
  LetterKind kind = LetterKind::det;
  int index = 1;

  static Letter u(int i) { return {LetterKind::unitary, i}; }
  static Letter uinv(int i) { return {LetterKind::unitary_inv, i}; }
  static Letter a(int j) { return {LetterKind::det, j}; }
  static Letter astar(int j) { return {LetterKind::det_adj, j}; }

  bool is_unitary() const { return kind == LetterKind::unitary || kind == LetterKind::unitary_inv; }
  // +1 for u, -1 for u⁻¹, 0 for deterministic letters
  int sign() const {
    return kind == LetterKind::unitary ? 1 : kind == LetterKind::unitary_inv ? -1 : 0;
  }
  Letter adjoint() const;
  std::string str() const;
  auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

Word parse_word(std::string_view text);
std::string format_word(const Word& w);  // the empty word prints as "1"
int degree(const Word& w);
int degree(const Word& w, int color);
int degree_plus(const Word& w, int color);
int degree_minus(const Word& w, int color);
std::vector<int> colors_of(const Word& w);
Word adjoint(const Word& w);
Word concat(const Word& a, const Word& b);
Word rotate(const Word& w, int k);  // w[k..] w[..k)
// lexicographically minimal rotation
Word canonical_cyclic(const Word& w);
// minimal rotation ending in a unitary letter; the word itself if deg 0
Word rotate_to_unitary_end(const Word& w);

// Exact Gaussian rational.
struct CQ {
  mpq_class re, im;
  CQ() = default;
  CQ(long v) : re(v) {}
  CQ(const mpq_class& r) : re(r) {}
  CQ(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  CQ conj() const { return {re, -im}; }
  // |re| + |im|
  mpq_class abs_bound() const { return abs(re) + abs(im); }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;
  static CQ parse(std::string_view text);
  bool operator==(const CQ& o) const { return re == o.re && im == o.im; }
};
CQ operator+(const CQ& a, const CQ& b);
CQ operator-(const CQ& a, const CQ& b);
CQ operator-(const CQ& a);
CQ operator*(const CQ& a, const CQ& b);
CQ& operator+=(CQ& a, const CQ& b);

class Poly {
 public:
  Poly() = default;
  Poly(const Word& w, CQ c = CQ(1));
  static Poly parse(std::string_view text);

  const std::map<Word, CQ>& terms() const { return terms_; }
  void add(const Word& w, const CQ& c);
  bool is_zero() const { return terms_.empty(); }
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator*(const CQ& c) const;
  Poly operator*(const Poly& o) const;
  Poly adjoint() const;
  std::string str() const;
  bool operator==(const Poly&) const = default;

 private:
  std::map<Word, CQ> terms_;
};
Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);

// Element of A⊗A as a combination of word pairs.
class Tensor {
 public:
  using Key = std::pair<Word, Word>;
  const std::map<Key, CQ>& terms() const { return terms_; }
  void add(const Word& l, const Word& r, const CQ& c);
  Tensor& operator+=(const Tensor& o);
  Tensor operator*(const CQ& c) const;
  bool is_zero() const { return terms_.empty(); }
  std::string str() const;
  bool operator==(const Tensor&) const = default;

 private:
  std::map<Key, CQ> terms_;
};

// Unique reading M₁u^{ε₁}…M_d u^{ε_d} of a word ending in a unitary letter.
struct WordDecomposition {
  std::vector<Word> M;
  std::vector<int> eps;
  std::vector<int> colors;
};
WordDecomposition decompose(const Word& w);
Word reassemble(const WordDecomposition& d);

// consecutive cycles of lengths deg P₁, deg P₂, … on [deg P]
Permutation gamma_of_tuple(const std::vector<Word>& P);

Tensor nc_derivative(const Poly& P, int color);
Poly cyclic_derivative(const Poly& P, int color);
Tensor reduced_laplacian(const Word& P, int color);
// Σ |coef| ξ^deg with |re|+|im| standing in for the modulus
mpq_class xi_norm(const Poly& P, const mpq_class& xi);

// Formal normalized trace monomial: sorted multiset of canonical cyclic words.
using TraceMonomial = std::vector<Word>;

class TraceExpr {
 public:
  TraceExpr() = default;
  static TraceExpr constant(const CQ& c);
  static TraceExpr tr(const Word& w);  // tr of a cyclic word

  const std::map<TraceMonomial, CQ>& terms() const { return terms_; }
  void add(TraceMonomial mono, const CQ& c);  // canonicalizes mono
  void add_canonical(const TraceMonomial& mono, const CQ& c);
  bool is_zero() const { return terms_.empty(); }
  TraceExpr& operator+=(const TraceExpr& o);
  TraceExpr& operator-=(const TraceExpr& o);
  TraceExpr operator*(const CQ& c) const;
  TraceExpr operator*(const TraceExpr& o) const;
  TraceExpr operator-() const { return *this * CQ(-1); }
  // adjoint of every cyclic word, conjugated coefficients
  TraceExpr conj() const;
  // substitute every trace by 1
  CQ unit_substitution() const;
  // Σ |coef| (every |tr| ≤ 1 bound)
  mpq_class abs_coefficient_sum() const;
  std::string str() const;
  bool operator==(const TraceExpr&) const = default;

 private:
  std::map<TraceMonomial, CQ> terms_;
};
TraceExpr operator+(TraceExpr a, const TraceExpr& b);
TraceExpr operator-(TraceExpr a, const TraceExpr& b);
TraceMonomial canonical_monomial(TraceMonomial mono);
std::string format_monomial(const TraceMonomial& mono);

// One cyclic word per cycle of σ, concatenating M along the cycle; M is indexed
// by the position of each label in σ.domain().
TraceExpr trace_of_permutation(const Permutation& sigma, const std::vector<Word>& M);
TraceMonomial trace_monomial_of_permutation(const Permutation& sigma, const std::vector<Word>& M);

using MatrixMap = std::map<int, Eigen::MatrixXcd>;

// Ordered matrix product; u⁻¹ is the conjugate transpose.
Eigen::MatrixXcd word_matrix(const Word& w, const MatrixMap& unitaries, const MatrixMap& A, int N);
std::complex<double> evaluate_trace_expression(const TraceExpr& T, const MatrixMap& A, int N);

}  // namespace umap

#endif
