#include "umap/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace umap {

Letter Letter::adjoint() const {
  switch (kind) {
    case LetterKind::det: return astar(index);
    case LetterKind::det_adj: return a(index);
    case LetterKind::unitary: return uinv(index);
    case LetterKind::unitary_inv: return u(index);
  }
  return *this;
}

std::string Letter::str() const {
  std::string i = std::to_string(index);
  switch (kind) {
    case LetterKind::det: return "a" + i;
    case LetterKind::det_adj: return "a" + i + "*";
    case LetterKind::unitary: return "u" + i;
    case LetterKind::unitary_inv: return "u" + i + "^-1";
  }
  return "?";
}

Word parse_word(std::string_view text) {
  Word w;
  size_t k = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("word syntax error at position " + std::to_string(k) + ": " + what);
  };
  while (k < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[k]))) { ++k; continue; }
    char c = text[k];
    if (c == '1' && (k + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[k + 1])))) {
      ++k;  // explicit unit
      continue;
    }
    if (c != 'a' && c != 'u') fail("expected 'a' or 'u'");
    size_t start = ++k;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
    if (start == k) fail("expected index");
    int idx = std::stoi(std::string(text.substr(start, k - start)));
    if (idx < 1) fail("index must be positive");
    if (c == 'a') {
      if (k < text.size() && text[k] == '*') {
        ++k;
        w.push_back(Letter::astar(idx));
      } else {
        w.push_back(Letter::a(idx));
      }
    } else {
      if (text.substr(k, 3) == "^-1") {
        k += 3;
        w.push_back(Letter::uinv(idx));
      } else if (text.substr(k, 2) == "^*" || text.substr(k, 1) == "*") {
        k += text[k] == '*' ? 1 : 2;
        w.push_back(Letter::uinv(idx));
      } else {
        w.push_back(Letter::u(idx));
      }
    }
    if (k < text.size() && !std::isspace(static_cast<unsigned char>(text[k]))) fail("unexpected character");
  }
  return w;
}

std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (size_t k = 0; k < w.size(); ++k) {
    if (k) s += ' ';
    s += w[k].str();
  }
  return s;
}

int degree(const Word& w) {
  return static_cast<int>(std::count_if(w.begin(), w.end(), [](const Letter& l) { return l.is_unitary(); }));
}

int degree(const Word& w, int color) { return degree_plus(w, color) + degree_minus(w, color); }

int degree_plus(const Word& w, int color) {
  return static_cast<int>(std::count(w.begin(), w.end(), Letter::u(color)));
}

int degree_minus(const Word& w, int color) {
  return static_cast<int>(std::count(w.begin(), w.end(), Letter::uinv(color)));
}

std::vector<int> colors_of(const Word& w) {
  std::vector<int> c;
  for (const auto& l : w)
    if (l.is_unitary()) c.push_back(l.index);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

Word adjoint(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->adjoint());
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word rotate(const Word& w, int k) {
  if (w.empty()) return w;
  Word out(w.begin() + k, w.end());
  out.insert(out.end(), w.begin(), w.begin() + k);
  return out;
}

Word canonical_cyclic(const Word& w) {
  Word best = w;
  for (size_t k = 1; k < w.size(); ++k) {
    Word r = rotate(w, static_cast<int>(k));
    if (r < best) best = std::move(r);
  }
  return best;
}

Word rotate_to_unitary_end(const Word& w) {
  if (degree(w) == 0) return w;
  Word best;
  bool have = false;
  for (size_t k = 0; k < w.size(); ++k) {
    Word r = rotate(w, static_cast<int>(k));
    if (!r.back().is_unitary()) continue;
    if (!have || r < best) best = std::move(r);
    have = true;
  }
  return best;
}

// ---------------------------------------------------------------- CQ

CQ operator+(const CQ& a, const CQ& b) { return {a.re + b.re, a.im + b.im}; }
CQ operator-(const CQ& a, const CQ& b) { return {a.re - b.re, a.im - b.im}; }
CQ operator-(const CQ& a) { return {-a.re, -a.im}; }
CQ operator*(const CQ& a, const CQ& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
CQ& operator+=(CQ& a, const CQ& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}

std::string CQ::str() const {
  if (sgn(im) == 0) return re.get_str();
  std::string s;
  if (sgn(re) != 0) s = re.get_str() + (sgn(im) > 0 ? "+" : "");
  return s + im.get_str() + "i";
}

CQ CQ::parse(std::string_view text) {
  std::string t(text);
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
  if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  if (t.empty()) throw std::invalid_argument("empty coefficient");
  auto rat = [](const std::string& s) {
    std::string v = s;
    if (!v.empty() && v[0] == '+') v = v.substr(1);
    if (v.empty() || v == "-") v += "1";
    mpq_class q;
    if (q.set_str(v, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    return q;
  };
  if (t.back() != 'i') return CQ(rat(t));
  t.pop_back();
  size_t split = std::string::npos;
  for (size_t k = 1; k < t.size(); ++k)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != '/') split = k;
  if (split == std::string::npos) return CQ(mpq_class(0), rat(t));
  return CQ(rat(t.substr(0, split)), rat(t.substr(split)));
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Word& w, CQ c) { add(w, c); }

void Poly::add(const Word& w, const CQ& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

Poly Poly::operator*(const CQ& c) const {
  Poly out;
  for (const auto& [w, d] : terms_) out.add(w, d * c);
  return out;
}

Poly Poly::operator*(const Poly& o) const {
  Poly out;
  for (const auto& [w1, c1] : terms_)
    for (const auto& [w2, c2] : o.terms_) out.add(concat(w1, w2), c1 * c2);
  return out;
}

Poly Poly::adjoint() const {
  Poly out;
  for (const auto& [w, c] : terms_) out.add(umap::adjoint(w), c.conj());
  return out;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    s += (sgn(c.im) != 0 ? "(" + c.str() + ")" : c.str()) + " * " + format_word(w);
  }
  return s;
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }

Poly Poly::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::vector<std::string> tok;
  for (std::string t; is >> t;) tok.push_back(t);
  Poly out;
  size_t k = 0;
  int sign = 1;
  while (k < tok.size()) {
    if (tok[k] == "+") { ++k; continue; }
    if (tok[k] == "-") { sign = -sign; ++k; continue; }
    CQ coeff(1);
    if (k + 1 < tok.size() && tok[k + 1] == "*") {
      coeff = CQ::parse(tok[k]);
      k += 2;
    }
    std::string word;
    while (k < tok.size() && tok[k] != "+" && tok[k] != "-") word += tok[k++] + " ";
    if (word.empty()) throw std::invalid_argument("polynomial syntax: missing word");
    out.add(parse_word(word), coeff * CQ(sign));
    sign = 1;
  }
  return out;
}

// ---------------------------------------------------------------- Tensor

void Tensor::add(const Word& l, const Word& r, const CQ& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(Key{l, r}, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Tensor& Tensor::operator+=(const Tensor& o) {
  for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
  return *this;
}

Tensor Tensor::operator*(const CQ& c) const {
  Tensor out;
  for (const auto& [k, d] : terms_) out.add(k.first, k.second, d * c);
  return out;
}

std::string Tensor::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    s += c.str() + " * " + format_word(k.first) + " ⊗ " + format_word(k.second);
  }
  return s;
}

// ---------------------------------------------------------------- decomposition

WordDecomposition decompose(const Word& w) {
  if (degree(w) == 0) throw std::invalid_argument("deterministic-only word has no decomposition");
  if (!w.back().is_unitary()) throw std::invalid_argument("word must end with a unitary letter");
  WordDecomposition d;
  Word cur;
  for (const auto& l : w) {
    if (l.is_unitary()) {
      d.M.push_back(std::move(cur));
      cur.clear();
      d.eps.push_back(l.sign());
      d.colors.push_back(l.index);
    } else {
      cur.push_back(l);
    }
  }
  return d;
}

Word reassemble(const WordDecomposition& d) {
  Word w;
  for (size_t k = 0; k < d.M.size(); ++k) {
    w.insert(w.end(), d.M[k].begin(), d.M[k].end());
    w.push_back(d.eps[k] > 0 ? Letter::u(d.colors[k]) : Letter::uinv(d.colors[k]));
  }
  return w;
}

Permutation gamma_of_tuple(const std::vector<Word>& P) {
  std::vector<std::vector<int>> cycles;
  int next = 1;
  for (const auto& w : P) {
    int d = degree(w);
    if (d == 0) throw std::invalid_argument("gamma_of_tuple: degree-0 entry");
    std::vector<int> c;
    for (int k = 0; k < d; ++k) c.push_back(next++);
    cycles.push_back(std::move(c));
  }
  return Permutation::from_cycles(iota_labels(next - 1), cycles);
}

// ---------------------------------------------------------------- operators

Tensor nc_derivative(const Poly& P, int color) {
  Tensor out;
  for (const auto& [w, c] : P.terms()) {
    for (size_t k = 0; k < w.size(); ++k) {
      if (w[k] == Letter::u(color))
        out.add(Word(w.begin(), w.begin() + k + 1), Word(w.begin() + k + 1, w.end()), c);
      else if (w[k] == Letter::uinv(color))
        out.add(Word(w.begin(), w.begin() + k), Word(w.begin() + k, w.end()), -c);
    }
  }
  return out;
}

Poly cyclic_derivative(const Poly& P, int color) {
  Poly out;
  for (const auto& [w, c] : P.terms()) {
    for (size_t k = 0; k < w.size(); ++k) {
      Word Q(w.begin(), w.begin() + k), R(w.begin() + k + 1, w.end());
      if (w[k] == Letter::u(color)) {
        Word x = concat(R, Q);
        x.push_back(Letter::u(color));
        out.add(x, c);
      } else if (w[k] == Letter::uinv(color)) {
        Word x{Letter::uinv(color)};
        x = concat(x, concat(R, Q));
        out.add(x, -c);
      }
    }
  }
  return out;
}

Tensor reduced_laplacian(const Word& P, int color) {
  const Letter u = Letter::u(color), ui = Letter::uinv(color);
  Tensor out;
  for (size_t k = 0; k < P.size(); ++k) {
    if (P[k] != u && P[k] != ui) continue;
    const CQ outer = P[k] == u ? CQ(1) : CQ(-1);
    Word P1(P.begin(), P.begin() + k), P2(P.begin() + k + 1, P.end());
    Word W = concat(P2, P1);
    for (size_t t = 0; t < W.size(); ++t) {
      Word Q1(W.begin(), W.begin() + t), Q2(W.begin() + t + 1, W.end());
      if (P[k] == u) {
        if (W[t] == u) out.add(concat(Q1, {u}), concat(Q2, {u}), outer);
        else if (W[t] == ui) out.add(Q1, Q2, -outer);
      } else {
        if (W[t] == u) out.add(Q1, Q2, outer);
        else if (W[t] == ui) out.add(concat({ui}, Q1), concat({ui}, Q2), -outer);
      }
    }
  }
  return out;
}

mpq_class xi_norm(const Poly& P, const mpq_class& xi) {
  if (xi < 1) throw std::invalid_argument("xi_norm requires xi >= 1");
  mpq_class s = 0;
  for (const auto& [w, c] : P.terms()) {
    mpq_class p = 1;
    for (int k = degree(w); k > 0; --k) p *= xi;
    s += c.abs_bound() * p;
  }
  return s;
}

// ---------------------------------------------------------------- TraceExpr

TraceMonomial canonical_monomial(TraceMonomial mono) {
  TraceMonomial out;
  for (auto& w : mono)
    if (!w.empty()) out.push_back(canonical_cyclic(w));
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_monomial(const TraceMonomial& mono) {
  std::string s;
  for (size_t k = 0; k < mono.size(); ++k) s += (k ? " tr(" : "tr(") + format_word(mono[k]) + ")";
  return s;
}

TraceExpr TraceExpr::constant(const CQ& c) {
  TraceExpr t;
  t.add_canonical({}, c);
  return t;
}

TraceExpr TraceExpr::tr(const Word& w) {
  TraceExpr t;
  t.add({w}, CQ(1));
  return t;
}

void TraceExpr::add(TraceMonomial mono, const CQ& c) { add_canonical(canonical_monomial(std::move(mono)), c); }

void TraceExpr::add_canonical(const TraceMonomial& mono, const CQ& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(mono, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TraceExpr& TraceExpr::operator+=(const TraceExpr& o) {
  for (const auto& [m, c] : o.terms_) add_canonical(m, c);
  return *this;
}

TraceExpr& TraceExpr::operator-=(const TraceExpr& o) {
  for (const auto& [m, c] : o.terms_) add_canonical(m, -c);
  return *this;
}

TraceExpr TraceExpr::operator*(const CQ& c) const {
  TraceExpr out;
  if (c.is_zero()) return out;
  for (const auto& [m, d] : terms_) out.terms_.emplace(m, d * c);
  return out;
}

TraceExpr TraceExpr::operator*(const TraceExpr& o) const {
  TraceExpr out;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      TraceMonomial m;
      std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
      out.add_canonical(m, c1 * c2);
    }
  return out;
}

TraceExpr TraceExpr::conj() const {
  TraceExpr out;
  for (const auto& [m, c] : terms_) {
    TraceMonomial a;
    for (const auto& w : m) a.push_back(adjoint(w));
    out.add(std::move(a), c.conj());
  }
  return out;
}

CQ TraceExpr::unit_substitution() const {
  CQ s;
  for (const auto& [m, c] : terms_) s += c;
  return s;
}

mpq_class TraceExpr::abs_coefficient_sum() const {
  mpq_class s = 0;
  for (const auto& [m, c] : terms_) s += c.abs_bound();
  return s;
}

std::string TraceExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    std::string cs = sgn(c.im) != 0 ? "(" + c.str() + ")" : c.str();
    s += m.empty() ? cs : cs + " * " + format_monomial(m);
  }
  return s;
}

TraceExpr operator+(TraceExpr a, const TraceExpr& b) { return a += b; }
TraceExpr operator-(TraceExpr a, const TraceExpr& b) { return a -= b; }

TraceMonomial trace_monomial_of_permutation(const Permutation& sigma, const std::vector<Word>& M) {
  if (static_cast<int>(M.size()) != sigma.size())
    throw std::invalid_argument("trace_of_permutation: index mismatch");
  TraceMonomial mono;
  for (const auto& cyc : sigma.cycles()) {
    Word w;
    for (int x : cyc) {
      const Word& m = M[sigma.index_of(x)];
      w.insert(w.end(), m.begin(), m.end());
    }
    mono.push_back(std::move(w));
  }
  return canonical_monomial(std::move(mono));
}

TraceExpr trace_of_permutation(const Permutation& sigma, const std::vector<Word>& M) {
  TraceExpr t;
  t.add_canonical(trace_monomial_of_permutation(sigma, M), CQ(1));
  return t;
}

Eigen::MatrixXcd word_matrix(const Word& w, const MatrixMap& unitaries, const MatrixMap& A, int N) {
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Identity(N, N);
  for (const auto& l : w) {
    const MatrixMap& src = l.is_unitary() ? unitaries : A;
    auto it = src.find(l.index);
    if (it == src.end()) throw std::invalid_argument("no matrix supplied for letter " + l.str());
    if (it->second.rows() != N || it->second.cols() != N)
      throw std::invalid_argument("dimension mismatch for letter " + l.str());
    if (l.kind == LetterKind::det || l.kind == LetterKind::unitary) X = X * it->second;
    else X = X * it->second.adjoint();
  }
  return X;
}

std::complex<double> evaluate_trace_expression(const TraceExpr& T, const MatrixMap& A, int N) {
  static const MatrixMap no_unitaries;
  std::map<Word, std::complex<double>> cache;
  std::complex<double> total = 0;
  for (const auto& [mono, c] : T.terms()) {
    std::complex<double> v = c.to_complex();
    for (const auto& w : mono) {
      auto it = cache.find(w);
      if (it == cache.end())
        it = cache.emplace(w, word_matrix(w, no_unitaries, A, N).trace() / static_cast<double>(N)).first;
      v *= it->second;
    }
    total += v;
  }
  return total;
}

}  // namespace umap
