#include "umap/expansion.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "umap/walks.hpp"
#include "umap/weingarten.hpp"

namespace umap {

namespace {

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

mpz_class power(long base, int e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), mpz_class(base).get_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

mpq_class qpow(const mpq_class& x, int e) {
  mpq_class out = 1;
  for (int k = 0; k < e; ++k) out *= x;
  return out;
}

std::vector<int> distinct_colors(const std::vector<int>& colors) {
  std::vector<int> c = colors;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

// Per-color walk-counting layout for the +1 labels of a tuple.
struct ColorLayout {
  std::vector<int> colors;
  std::vector<std::vector<int>> plus_pos;  // global positions (label − 1)
};

ColorLayout color_layout(const TupleData& T) {
  ColorLayout L;
  L.colors = distinct_colors(T.colors);
  for (int c : L.colors) {
    std::vector<int> pos;
    for (size_t k = 0; k < T.labels.size(); ++k)
      if (T.colors[k] == c && T.eps.signs()[k] > 0) pos.push_back(static_cast<int>(k));
    L.plus_pos.push_back(std::move(pos));
  }
  return L;
}

std::vector<WalkCounter::LocalPerm> walk_targets(const ColorLayout& L, const Permutation& pi) {
  std::vector<WalkCounter::LocalPerm> out;
  for (const auto& pos : L.plus_pos) {
    WalkCounter::LocalPerm t(pos.size());
    for (size_t k = 0; k < pos.size(); ++k) {
      int y = pi(pi(pos[k] + 1)) - 1;
      t[k] = static_cast<std::uint8_t>(std::lower_bound(pos.begin(), pos.end(), y) - pos.begin());
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string tuple_key(int g, const Tuple& P) {
  std::string key = std::to_string(g);
  for (const auto& w : P) key += "|" + format_word(w);
  return key;
}

TraceExpr genus_core(int g, const Tuple& P, bool rotate = true) {
  const int l = static_cast<int>(P.size());
  for (const auto& w : P)
    if (degree(w) == 0) return (l == 1 && g == 0) ? TraceExpr::tr(w) : TraceExpr();
  if (!tuple_balanced(P)) return {};
  TupleData T = tuple_data(P, rotate);
  const int m = T.m();
  ColorLayout L = color_layout(T);
  WalkCounter wc(L.plus_pos, static_cast<int>(T.labels.size()));
  TraceExpr out;
  for (const auto& pi : colored_sign_compatible(T.eps, T.colors)) {
    Permutation phi = compose(T.gamma, pi.inverse());
    int cphi = phi.num_cycles();
    int r = l + cphi - m - 2 + 2 * g;
    if (r < 0) continue;
    auto blocks = orbit_blocks({T.gamma, pi}, T.labels);
    std::vector<std::uint8_t> B(blocks.begin(), blocks.end());
    mpz_class cnt = wc.count(walk_targets(L, pi), r, B);
    if (cnt == 0) continue;
    if ((m + l + cphi) % 2) cnt = -cnt;
    out += trace_of_permutation(phi, T.M) * CQ(mpq_class(cnt));
  }
  return out;
}

// Multilinear extension over polynomial arguments.
TraceExpr genus_multilinear(int g, const std::vector<Poly>& args) {
  TraceExpr out;
  Tuple cur;
  std::function<void(size_t, CQ)> rec = [&](size_t k, CQ c) {
    if (k == args.size()) {
      out += genus_coefficient(g, cur) * c;
      return;
    }
    for (const auto& [w, a] : args[k].terms()) {
      cur.push_back(w);
      rec(k + 1, c * a);
      cur.pop_back();
    }
  };
  rec(0, CQ(1));
  return out;
}

}  // namespace

// ----------------------------------------------------------------- tuple data

TupleData tuple_data(const Tuple& P, bool rotate) {
  TupleData T;
  Tuple rotated;
  std::vector<int> signs;
  for (const auto& w : P) {
    if (degree(w) == 0) throw std::invalid_argument("tuple entry of degree 0");
    if (!rotate && !w.back().is_unitary()) throw std::invalid_argument(format_word(w) + " does not end in a unitary letter");
    Word r = rotate ? rotate_to_unitary_end(w) : w;
    auto d = decompose(r);
    T.M.insert(T.M.end(), d.M.begin(), d.M.end());
    signs.insert(signs.end(), d.eps.begin(), d.eps.end());
    T.colors.insert(T.colors.end(), d.colors.begin(), d.colors.end());
    rotated.push_back(std::move(r));
  }
  T.labels = iota_labels(static_cast<int>(T.M.size()));
  T.eps = SignVector(T.labels, signs);
  T.gamma = gamma_of_tuple(rotated);
  return T;
}

bool tuple_balanced(const Tuple& P) {
  std::map<int, int> bal;
  for (const auto& w : P)
    for (const auto& l : w)
      if (l.is_unitary()) bal[l.index] += l.sign();
  return std::all_of(bal.begin(), bal.end(), [](const auto& kv) { return kv.second == 0; });
}

// ----------------------------------------------------------------- moments and cumulants

TraceExpr moment_haar(const Tuple& P, int N) {
  if (N < 1) throw std::invalid_argument("moment: N must be positive");
  TraceExpr scalar = TraceExpr::constant(CQ(1));
  Tuple rest;
  for (const auto& w : P) {
    if (degree(w) == 0) scalar = scalar * (TraceExpr::tr(w) * CQ(mpq_class(N)));
    else rest.push_back(w);
  }
  if (rest.empty()) return scalar;
  if (!tuple_balanced(rest)) return {};
  TupleData T = tuple_data(rest);
  auto cs = distinct_colors(T.colors);
  std::vector<std::shared_ptr<const WeingartenTable>> tables;
  std::vector<std::vector<int>> classes;
  std::vector<SignVector> class_eps;
  for (int c : cs) {
    std::vector<int> J, s;
    for (size_t k = 0; k < T.labels.size(); ++k)
      if (T.colors[k] == c) J.push_back(T.labels[k]), s.push_back(T.eps.signs()[k]);
    tables.push_back(WeingartenTable::get(static_cast<int>(J.size()) / 2, N));
    classes.push_back(J);
    class_eps.emplace_back(J, s);
  }
  TraceExpr out;
  for (const auto& pi : colored_sign_compatible(T.eps, T.colors)) {
    mpq_class w = 1;
    for (size_t c = 0; c < cs.size(); ++c)
      w *= tables[c]->at(pi_eps(restrict_to(pi, classes[c]), class_eps[c]).cycle_type());
    Permutation phi = compose(T.gamma, pi.inverse());
    w *= power(N, phi.num_cycles());
    out += trace_of_permutation(phi, T.M) * CQ(w);
  }
  return out * scalar;
}

std::vector<std::vector<int>> set_partitions(int n) {
  std::vector<std::vector<int>> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> a(n, 0), mx(n, 0);
  for (;;) {
    out.push_back(a);
    int k = n - 1;
    while (k > 0 && a[k] == mx[k - 1] + 1) --k;
    if (k == 0) break;
    ++a[k];
    mx[k] = std::max(mx[k - 1], a[k]);
    for (int t = k + 1; t < n; ++t) a[t] = 0, mx[t] = mx[k];
  }
  return out;
}

TraceExpr cumulant_haar(const Tuple& P, int N) {
  std::function<TraceExpr(const std::vector<int>&)> mom = [&](const std::vector<int>& idx) {
    Tuple sub;
    for (int k : idx) sub.push_back(P[k]);
    return moment_haar(sub, N);
  };
  return cumulant_from_moments<TraceExpr>(static_cast<int>(P.size()), mom);
}

// ----------------------------------------------------------------- genus coefficients

TraceExpr genus_coefficient(int g, const Tuple& P) {
  if (g < 0 || P.empty()) return {};
  static std::mutex mu;
  static std::unordered_map<std::string, TraceExpr> cache;
  std::string key = tuple_key(g, P);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  TraceExpr v = genus_core(g, P);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 2000000) cache.clear();
  return cache.emplace(std::move(key), std::move(v)).first->second;
}

TraceExpr genus_coefficient_at(int g, const Tuple& P) {
  if (g < 0 || P.empty()) return {};
  return genus_core(g, P, false);
}

TraceExpr genus_coefficient_by_enumeration(int g, const Tuple& P) {
  const int l = static_cast<int>(P.size());
  if (g < 0 || l == 0) return {};
  for (const auto& w : P)
    if (degree(w) == 0) return (l == 1 && g == 0) ? TraceExpr::tr(w) : TraceExpr();
  if (!tuple_balanced(P)) return {};
  TupleData T = tuple_data(P);
  EnumerateOptions opt;
  opt.genus = g;
  opt.connected_only = true;
  TraceExpr out;
  for (const auto& map : enumerate_maps(T.labels, T.eps, T.gamma.inverse(), T.colors, opt)) {
    auto d = diagnostics(map);
    int sign = (T.m() + l + d.phi.num_cycles()) % 2 ? -1 : 1;
    out += trace_of_permutation(d.phi, T.M) * CQ(sign);
  }
  return out;
}

std::complex<double> truncated_genus_series(const Tuple& P, int G, int N, const MatrixMap& A) {
  std::complex<double> s = 0;
  for (int g = 0; g <= G; ++g)
    s += std::pow(static_cast<double>(N), -2.0 * g) * evaluate_trace_expression(genus_coefficient(g, P), A, N);
  return s;
}

CQ evaluate_exact(const TraceExpr& T, const std::map<int, ExactMatrix>& A) {
  auto mul = [](const ExactMatrix& X, const ExactMatrix& Y) {
    size_t n = X.size();
    ExactMatrix Z(n, std::vector<CQ>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) Z[i][j] += X[i][k] * Y[k][j];
    return Z;
  };
  if (A.empty()) {
    CQ s;
    for (const auto& [mono, c] : T.terms()) {
      if (!mono.empty()) throw std::invalid_argument("evaluate_exact: no matrices supplied");
      s += c;
    }
    return s;
  }
  const size_t n = A.begin()->second.size();
  CQ total;
  for (const auto& [mono, c] : T.terms()) {
    CQ v = c;
    for (const auto& w : mono) {
      ExactMatrix X(n, std::vector<CQ>(n));
      for (size_t i = 0; i < n; ++i) X[i][i] = CQ(1);
      for (const auto& l : w) {
        if (l.is_unitary()) throw std::invalid_argument("evaluate_exact: unitary letter in a trace");
        auto it = A.find(l.index);
        if (it == A.end()) throw std::invalid_argument("evaluate_exact: missing matrix a" + std::to_string(l.index));
        ExactMatrix Y = it->second;
        if (l.kind == LetterKind::det_adj) {
          ExactMatrix Z(n, std::vector<CQ>(n));
          for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) Z[i][j] = Y[j][i].conj();
          Y = std::move(Z);
        }
        X = mul(X, Y);
      }
      CQ tr;
      for (size_t i = 0; i < n; ++i) tr += X[i][i];
      v = v * (tr * CQ(mpq_class(1, static_cast<long>(n))));
    }
    total += v;
  }
  return total;
}

// ----------------------------------------------------------------- formal cumulants

int Potential::nu() const {
  int v = 0;
  for (const auto& w : q) v = std::max(v, degree(w));
  return v;
}

std::vector<std::vector<int>> multi_indices(int k, int max_total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[i] = v;
      rec(i + 1, left - v);
    }
    cur[i] = 0;
  };
  rec(0, max_total);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int sa = std::accumulate(a.begin(), a.end(), 0), sb = std::accumulate(b.begin(), b.end(), 0);
    return sa != sb ? sa < sb : a > b;
  });
  return out;
}

FormalCumulant formal_cumulant(int g, const Tuple& P, const Potential& V, int z_cap) {
  if (z_cap < 0) throw std::invalid_argument("formal cumulant: negative z order");
  for (const auto& q : V.q)
    if (degree(q) == 0) throw std::invalid_argument("potential monomials need unitary degree >= 1");
  FormalCumulant F;
  F.g = g;
  F.l = static_cast<int>(P.size());
  F.z_cap = z_cap;
  for (const auto& n : multi_indices(static_cast<int>(V.q.size()), z_cap)) {
    Tuple t;
    mpz_class nf = 1;
    for (size_t i = 0; i < n.size(); ++i) {
      for (int k = 0; k < n[i]; ++k) t.push_back(V.q[i]);
      nf *= factorial(n[i]);
    }
    t.insert(t.end(), P.begin(), P.end());
    TraceExpr c = genus_coefficient(g, t) * CQ(mpq_class(1, nf));
    if (!c.is_zero()) F.coefficients.emplace(n, std::move(c));
  }
  return F;
}

std::string FormalCumulant::str() const {
  std::ostringstream os;
  for (const auto& [n, c] : coefficients) {
    os << "z^(";
    for (size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
    os << "): " << c.str() << "\n";
  }
  return os.str();
}

// ----------------------------------------------------------------- Tutte identities

IdentityCheck tutte_check(int g, const Tuple& P, int color) {
  if (P.empty()) throw std::invalid_argument("tutte_check: empty tuple");
  const int l = static_cast<int>(P.size());
  Tuple rest(P.begin(), P.end() - 1);
  Tensor dP = nc_derivative(Poly(P.back()), color);
  IdentityCheck res;
  for (unsigned mask = 0; mask < (1u << (l - 1)); ++mask) {
    Tuple in, out;
    for (int k = 0; k < l - 1; ++k) (mask >> k & 1u ? in : out).push_back(rest[k]);
    for (int g1 = 0; g1 <= g; ++g1)
      for (const auto& [key, c] : dP.terms()) {
        Tuple a = in, b = out;
        a.push_back(key.first);
        b.push_back(key.second);
        TraceExpr x = genus_coefficient(g1, a);
        if (x.is_zero()) continue;
        res.lhs += x * genus_coefficient(g - g1, b) * c;
      }
  }
  for (const auto& [key, c] : dP.terms()) {
    Tuple t = rest;
    t.push_back(key.first);
    t.push_back(key.second);
    res.rhs -= genus_coefficient(g - 1, t) * c;
  }
  for (int j = 0; j < l - 1; ++j) {
    std::vector<Poly> args;
    for (int k = 0; k < l - 1; ++k)
      if (k != j) args.emplace_back(rest[k]);
    args.push_back(cyclic_derivative(Poly(rest[j]), color) * Poly(P.back()));
    res.rhs -= genus_multilinear(g, args);
  }
  return res;
}

IdentityCheck tutte_recursion_check(int g, const Tuple& P) {
  if (P.empty() || P.back().empty() || P.back().back().kind != LetterKind::unitary)
    throw std::invalid_argument("tutte recursion: the last entry must end with some u_i");
  const int l = static_cast<int>(P.size());
  const Letter u = P.back().back();
  const Letter ui = Letter::uinv(u.index);
  Word Pl(P.back().begin(), P.back().end() - 1);
  Tuple rest(P.begin(), P.end() - 1);
  IdentityCheck res;
  res.lhs = genus_coefficient(g, P);
  auto split_products = [&](const Word& Q, const Word& R) {
    TraceExpr s;
    Tuple t = rest;
    t.push_back(Q);
    t.push_back(R);
    s += genus_coefficient(g - 1, t);
    for (unsigned mask = 0; mask < (1u << (l - 1)); ++mask) {
      Tuple in, out;
      for (int k = 0; k < l - 1; ++k) (mask >> k & 1u ? in : out).push_back(rest[k]);
      in.push_back(Q);
      out.push_back(R);
      for (int g1 = 0; g1 <= g; ++g1) {
        TraceExpr x = genus_coefficient(g1, in);
        if (!x.is_zero()) s += x * genus_coefficient(g - g1, out);
      }
    }
    return s;
  };
  for (size_t k = 0; k < Pl.size(); ++k) {
    Word Q(Pl.begin(), Pl.begin() + k), R(Pl.begin() + k + 1, Pl.end());
    if (Pl[k] == u) res.rhs -= split_products(concat(Q, {u}), concat(R, {u}));
    else if (Pl[k] == ui) res.rhs += split_products(Q, R);
  }
  for (int j = 0; j < l - 1; ++j) {
    Tuple others;
    for (int k = 0; k < l - 1; ++k)
      if (k != j) others.push_back(rest[k]);
    const Word& Pj = rest[j];
    for (size_t k = 0; k < Pj.size(); ++k) {
      Word Q(Pj.begin(), Pj.begin() + k), R(Pj.begin() + k + 1, Pj.end());
      Tuple t = others;
      if (Pj[k] == u) {
        t.push_back(concat(concat(concat(R, Q), {u}), concat(Pl, {u})));
        res.rhs -= genus_coefficient(g, t);
      } else if (Pj[k] == ui) {
        t.push_back(concat(concat(R, Q), Pl));
        res.rhs += genus_coefficient(g, t);
      }
    }
  }
  return res;
}

// ----------------------------------------------------------------- Hurwitz reduction

bool is_alternated(const Word& w) {
  int expect = 1, color = 0;
  bool seen = false;
  for (const auto& l : w) {
    if (!l.is_unitary()) continue;
    if (!seen) color = l.index, seen = true;
    if (l.index != color || l.sign() != expect) return false;
    expect = -expect;
  }
  return seen && expect == 1;
}

TraceExpr hurwitz_reduction(int g, const Tuple& P) {
  if (P.empty()) throw std::invalid_argument("hurwitz: empty tuple");
  int color = 0;
  std::vector<Word> B, C;
  std::vector<int> lengths;
  for (const auto& w : P) {
    if (!is_alternated(w)) throw std::invalid_argument("hurwitz: " + format_word(w) + " is not alternated");
    Word cur;
    int mi = 0;
    for (const auto& l : w) {
      if (!l.is_unitary()) {
        cur.push_back(l);
        continue;
      }
      if (color == 0) color = l.index;
      if (l.index != color) throw std::invalid_argument("hurwitz: a single unitary color is required");
      (l.sign() > 0 ? B : C).push_back(cur);
      cur.clear();
      mi += l.sign() > 0;
    }
    // trailing letters after the last u⁻¹ belong cyclically in front of B₁
    if (!cur.empty()) B[B.size() - mi] = concat(cur, B[B.size() - mi]);
    lengths.push_back(mi);
  }
  const int m = static_cast<int>(B.size());
  const int l = static_cast<int>(P.size());
  // γ̃ = γ²|₊ is the product of the cycles of lengths m_i on [m]
  std::vector<std::vector<int>> cyc;
  int next = 1;
  for (int mi : lengths) {
    std::vector<int> c;
    for (int k = 0; k < mi; ++k) c.push_back(next++);
    cyc.push_back(c);
  }
  auto I = iota_labels(m);
  Permutation gt = Permutation::from_cycles(I, cyc);
  std::vector<int> one(m);
  std::iota(one.begin(), one.end(), 1);
  std::vector<Permutation> all;
  do all.push_back(Permutation::from_images(I, one));
  while (std::next_permutation(one.begin(), one.end()));
  TraceExpr out;
  for (const auto& rho : all) {
    TraceExpr tb = trace_of_permutation(rho, B);
    Permutation rinv = rho.inverse();
    for (const auto& sigma : all) {
      mpz_class h = monotone_hurwitz_by_genus(rinv, gt, sigma, g);
      if (h == 0) continue;
      if ((m + l + rho.num_cycles() + sigma.num_cycles()) % 2) h = -h;
      out += tb * trace_of_permutation(sigma.inverse(), C) * CQ(mpq_class(h));
    }
  }
  return out;
}

// ----------------------------------------------------------------- bounds

mpz_class catalan(int n) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), 2ul * static_cast<unsigned long>(n), static_cast<unsigned long>(n));
  return b / (n + 1);
}

BoundConstants bound_constants(int k, int nu) {
  const mpq_class sqrt6("2449489742783/1000000000000");
  const mpq_class pi_quarter("1331335363800/1000000000000");
  const mpq_class e_inv_e("1444667861009/1000000000000");
  BoundConstants c;
  c.A = sqrt6 * pi_quarter * mpq_class(power(2, k + 3));
  c.A.canonicalize();
  c.C = c.A;
  c.B = mpq_class(3 * power(4, k + 1));
  c.D = mpq_class(4 * k) * qpow(4 * e_inv_e, nu);
  c.D.canonicalize();
  return c;
}

BoundReport bounds_check(int g, const Tuple& P, const Potential& V, const std::vector<int>& n) {
  if (n.size() != V.q.size()) throw std::invalid_argument("bounds: multi-index length differs from k");
  if (P.empty()) throw std::invalid_argument("bounds: empty tuple");
  const int k = static_cast<int>(V.q.size());
  const int nu = V.nu();
  Tuple t;
  mpz_class nf = 1;
  int ntot = 0;
  for (int i = 0; i < k; ++i) {
    for (int s = 0; s < n[i]; ++s) t.push_back(V.q[i]);
    nf *= factorial(n[i]);
    ntot += n[i];
  }
  t.insert(t.end(), P.begin(), P.end());
  BoundReport rep;
  rep.lhs = genus_coefficient(g, t).abs_coefficient_sum() / mpq_class(nf);
  rep.lhs.canonicalize();
  int m = 0;
  for (const auto& w : P) m += degree(w);
  const int l = static_cast<int>(P.size());
  auto c = bound_constants(std::max(k, 1), nu);
  int e = m + nu * ntot;
  mpq_class rhs = qpow(c.A, l * e) / qpow(c.B, l) * qpow(c.C, g * e) * qpow(c.D, ntot);
  for (const auto& w : P) rhs *= catalan(degree(w));
  for (int v : n) rhs *= catalan(v);
  rhs.canonicalize();
  rep.rhs = rhs;
  return rep;
}

double radius_RV(int k, int nu) {
  double A = std::sqrt(6.0) * std::pow(M_PI, 0.25) * std::pow(2.0, k + 3);
  double B = 3 * std::pow(4.0, k + 1);
  double D = 4.0 * k * std::pow(4 * std::exp(1 / M_E), nu);
  double r1 = 0.5 / (4 * A * D);
  double r2 = 1 / (2.0 * k * nu * std::pow(4 * A + std::pow(2.0, k + 2) / B, nu));
  return std::min(r1, r2);
}

// ----------------------------------------------------------------- master operator

TracePoly regularized_T(const Word& P) {
  const int d = degree(P);
  if (d == 0) throw std::invalid_argument("regularized T: D^-1 is undefined in degree 0");
  TracePoly out;
  const CQ inv_d(mpq_class(1, d));
  auto tau = [](const Word& w) { return genus_coefficient(0, Tuple{w}); };
  auto put = [&](const Word& w, const TraceExpr& e) {
    if (degree(w) == 0 || e.is_zero()) return;
    auto& slot = out[w];
    slot += e;
    if (slot.is_zero()) out.erase(w);
  };
  for (int color : colors_of(P)) {
    Tensor lap = reduced_laplacian(P, color);
    for (const auto& [key, c] : lap.terms()) {
      put(key.first, tau(key.second) * (c * inv_d));
      put(key.second, tau(key.first) * (c * inv_d));
    }
  }
  return out;
}

IdentityCheck master_operator_check(const Word& P1, const Word& P2) {
  const int d = degree(P2);
  if (d == 0) throw std::invalid_argument("master check: P2 must have positive degree");
  IdentityCheck res;
  res.lhs = genus_coefficient(0, {P1, P2});
  for (const auto& [w, e] : regularized_T(P2)) res.lhs += genus_coefficient(0, {P1, w}) * e;
  std::vector<int> cs = colors_of(P1);
  for (int c : colors_of(P2)) cs.push_back(c);
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  Poly prod;
  for (int c : cs) prod += cyclic_derivative(Poly(P1), c) * cyclic_derivative(Poly(P2), c);
  for (const auto& [w, c] : prod.terms()) res.rhs -= genus_coefficient(0, {w}) * (c * CQ(mpq_class(1, d)));
  return res;
}

IdentityCheck gradient_trick_check(const Word& P, int color, const Bilinear& mu2) {
  IdentityCheck res;
  Tensor t = nc_derivative(cyclic_derivative(Poly(P), color), color);
  for (const auto& [key, c] : t.terms()) res.lhs += mu2(key.first, key.second) * c;
  res.rhs += mu2(P, Word{}) * CQ(degree_plus(P, color));
  res.rhs += mu2(Word{}, P) * CQ(degree_minus(P, color));
  Tensor lap = reduced_laplacian(P, color);
  for (const auto& [key, c] : lap.terms()) res.rhs += mu2(key.first, key.second) * c;
  return res;
}

NormBoundReport operator_norm_bound_check(const std::function<std::complex<double>(const Word&)>& tau,
                                          double tau_norm_xi1, double xi1, double xi2, const Poly& P) {
  if (!(1 <= xi1 && xi1 < xi2)) throw std::invalid_argument("norm bound: need 1 <= xi1 < xi2");
  std::map<Word, std::complex<double>> TP;
  double pnorm = 0;
  for (const auto& [w, c] : P.terms()) {
    const int d = degree(w);
    pnorm += std::abs(c.to_complex()) * std::pow(xi2, d);
    if (d == 0) continue;
    for (int color : colors_of(w)) {
      Tensor lap = reduced_laplacian(w, color);
      for (const auto& [key, k] : lap.terms()) {
        std::complex<double> f = c.to_complex() * k.to_complex() / static_cast<double>(d);
        TP[key.first] += f * tau(key.second);
        TP[key.second] += f * tau(key.first);
      }
    }
  }
  NormBoundReport rep;
  for (const auto& [w, v] : TP) rep.lhs += std::abs(v) * std::pow(xi2, degree(w));
  rep.rhs = 2 * tau_norm_xi1 * xi1 / (xi2 - xi1) * pnorm;
  return rep;
}

// ----------------------------------------------------------------- generic grids

std::vector<Tuple> generic_tuples(int min_deg, int max_deg, int max_l, int colors) {
  std::vector<Tuple> out;
  for (int d = std::max(min_deg, 1); d <= max_deg; ++d) {
    // compositions of d into l positive parts
    std::vector<std::vector<int>> comps;
    std::function<void(int, std::vector<int>&)> rec = [&](int left, std::vector<int>& cur) {
      if (left == 0) {
        comps.push_back(cur);
        return;
      }
      if (static_cast<int>(cur.size()) == max_l) return;
      for (int p = 1; p <= left; ++p) {
        cur.push_back(p);
        rec(left - p, cur);
        cur.pop_back();
      }
    };
    std::vector<int> cur;
    rec(d, cur);
    long ncolorings = 1;
    for (int k = 0; k < d; ++k) ncolorings *= colors;
    for (const auto& comp : comps)
      for (int signs = 0; signs < (1 << d); ++signs)
        for (long col = 0; col < ncolorings; ++col) {
          std::vector<int> cl(d);
          long x = col;
          int maxc = 0;
          bool ok = true;
          for (int k = 0; k < d; ++k) {
            cl[k] = static_cast<int>(x % colors) + 1;
            x /= colors;
            if (cl[k] > maxc + 1) ok = false;
            maxc = std::max(maxc, cl[k]);
          }
          if (!ok) continue;
          Tuple t;
          int slot = 0;
          for (int part : comp) {
            Word w;
            for (int k = 0; k < part; ++k, ++slot) {
              w.push_back(Letter::a(slot + 1));
              w.push_back(signs >> slot & 1 ? Letter::uinv(cl[slot]) : Letter::u(cl[slot]));
            }
            t.push_back(std::move(w));
          }
          out.push_back(std::move(t));
        }
  }
  return out;
}

}  // namespace umap
