#include "umap/grids.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "umap/maps.hpp"
#include "umap/oracle.hpp"
#include "umap/weingarten.hpp"

namespace umap {

void GridReport::fail(const std::string& what) {
  ++failures;
  if (failing.size() < 8) failing.push_back(what);
}

void parallel_for(long n, int threads, const std::function<void(long)>& f) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<long>(n, 1))));
  if (threads == 1) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (long i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string tuple_str(const Tuple& P) {
  std::string s = "(";
  for (size_t k = 0; k < P.size(); ++k) s += (k ? ", " : "") + format_word(P[k]);
  return s + ")";
}

Permutation of_cycle_type(const std::vector<int>& type) {
  int q = std::accumulate(type.begin(), type.end(), 0);
  std::vector<std::vector<int>> cyc;
  int next = 1;
  for (int len : type) {
    std::vector<int> c;
    for (int k = 0; k < len; ++k) c.push_back(next++);
    cyc.push_back(c);
  }
  return Permutation::from_cycles(iota_labels(q), cyc);
}

std::string type_str(const std::vector<int>& t) {
  std::string s;
  for (size_t k = 0; k < t.size(); ++k) s += (k ? "+" : "") + std::to_string(t[k]);
  return s;
}

// Per-instance outcomes collected in index order, so reports do not depend on threads.
struct Outcome {
  long checked = 0;
  std::vector<std::string> failures;
  long nonzero = 0;
};

void absorb(GridReport& rep, const std::vector<Outcome>& out) {
  long nz = 0;
  for (const auto& o : out) {
    rep.checked += o.checked;
    nz += o.nonzero;
    for (const auto& f : o.failures) rep.fail(f);
  }
  rep.details["nonzero"] = std::to_string(nz);
}

long random_below(Philox4x32& rng, long n) { return static_cast<long>(rng.uniform() * static_cast<double>(n)); }

}  // namespace

// ----------------------------------------------------------------- Weingarten

GridReport weingarten_grid(int max_q, int R, double tol) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "weingarten";
  double worst = 0;
  for (int q = 1; q <= max_q; ++q)
    for (int N = q; N <= q + 4; ++N)
      for (const auto& type : partitions_of(q)) {
        Permutation pi = of_cycle_type(type);
        mpq_class exact = weingarten_exact(pi, N);
        mpq_class series = weingarten_series_partial(pi, N, R);
        mpq_class diff = abs(series - exact);
        double err = diff.get_d();
        worst = std::max(worst, err);
        ++rep.checked;
        if (!(err <= tol)) {
          std::ostringstream os;
          os << "q=" << q << " N=" << N << " class " << type_str(type) << " |series-exact|=" << err;
          rep.fail(os.str());
        }
        if (q == 2) {
          mpq_class want = type.size() == 2 ? mpq_class(1, N * N - 1) : mpq_class(-1, N * (N * N - 1));
          want.canonicalize();
          ++rep.checked;
          if (exact != want) rep.fail("q=2 N=" + std::to_string(N) + " class " + type_str(type) + " = " + exact.get_str());
        }
      }
  std::ostringstream os;
  os << worst;
  rep.details["max_error"] = os.str();
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- bijection

GridReport bijection_grid(int seeds, int max_labels, int max_r) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "bijection";
  long maps = 0;
  auto round_trip = [&](const UnitaryTypeMap& map, const std::string& tag) {
    ++rep.checked;
    EmbeddedMap E = build_embedded(map);
    UnitaryTypeMap back = to_perm_data(E);
    if (!(back == map)) return rep.fail(tag + ": to_perm_data(build) differs");
    if (!(build_embedded(back) == E)) rep.fail(tag + ": build(to_perm_data) differs");
  };
  // the worked example map
  {
    Permutation rho = Permutation::parse_n("(1 4 3 7)(5 6)(2 8)", 8);
    SignVector eps = SignVector::parse("++--++--");
    Permutation pi = Permutation::parse_n("(1 7 6 8 2 4)(3 5)", 8);
    MonotoneWalk walk{{Transposition(1, 2), Transposition(2, 6)}};
    UnitaryTypeMap map = build_map(rho, eps, pi, walk);
    round_trip(map, "example");
    UnitaryTypeMap back = to_perm_data(build_embedded(map));
    ++rep.checked;
    Permutation phi = diagnostics(back).phi;
    if (!(back.rho == rho && back.eps == eps && back.pi == pi && back.walks.at(1) == walk &&
          phi == Permutation::parse_n("(1)(2)(3 6)(4 8 5)(7)", 8)))
      rep.fail("example: recovered data differ, phi = " + phi.str());
    rep.details["example_phi"] = phi.str();
  }
  for (int s = 1; s <= seeds; ++s) {
    Philox4x32 rng(static_cast<std::uint64_t>(s), 0xB17EC7ull);
    int m = 1 + static_cast<int>(random_below(rng, max_labels / 2));
    int n = 2 * m;
    std::vector<int> I = iota_labels(n), signs(n, -1), images = I, colors(n, 1);
    std::fill(signs.begin(), signs.begin() + m, 1);
    for (int k = n - 1; k > 0; --k) {
      std::swap(signs[k], signs[random_below(rng, k + 1)]);
      std::swap(images[k], images[random_below(rng, k + 1)]);
    }
    if (s % 2 == 0) {
      // two colors, each balanced: pair the k-th + label with the k-th − label
      std::vector<int> plus, minus;
      for (int k = 0; k < n; ++k) (signs[k] > 0 ? plus : minus).push_back(k);
      for (int k = 0; k < m; ++k) colors[plus[k]] = colors[minus[k]] = 1 + static_cast<int>(random_below(rng, 2));
    }
    SignVector eps(I, signs);
    Permutation rho = Permutation::from_images(I, images);
    for (int r = 0; r <= max_r; ++r) {
      EnumerateOptions opt;
      opt.r = r;
      for (const auto& map : enumerate_maps(I, eps, rho, colors, opt)) {
        ++maps;
        round_trip(map, "seed " + std::to_string(s) + " r=" + std::to_string(r));
      }
    }
  }
  rep.details["maps"] = std::to_string(maps);
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- Tutte

GridReport tutte_grid(int G, int max_deg, int max_l, int colors, int threads) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "tutte";
  auto tuples = generic_tuples(1, max_deg, max_l, colors);
  std::vector<Outcome> out(tuples.size());
  parallel_for(static_cast<long>(tuples.size()), threads, [&](long i) {
    const Tuple& P = tuples[i];
    Outcome& o = out[i];
    for (int g = 0; g <= G; ++g) {
      for (int c : colors_of(P.back())) {
        auto chk = tutte_check(g, P, c);
        ++o.checked;
        if (!chk.lhs.is_zero()) ++o.nonzero;
        if (!chk.equal()) o.failures.push_back("tensor g=" + std::to_string(g) + " color " + std::to_string(c) + " " + tuple_str(P));
      }
      if (P.back().back().kind == LetterKind::unitary) {
        auto chk = tutte_recursion_check(g, P);
        ++o.checked;
        if (!chk.lhs.is_zero()) ++o.nonzero;
        if (!chk.equal()) o.failures.push_back("recursion g=" + std::to_string(g) + " " + tuple_str(P));
      }
    }
  });
  absorb(rep, out);
  rep.details["tuples"] = std::to_string(tuples.size());
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- convergence

GridReport convergence_report(std::vector<ConvergenceRow>* rows) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "convergence";
  auto q = [](long a, long b) { return mpq_class(a, b); };
  auto mat = [](CQ a, CQ b, CQ c, CQ d) { return ExactMatrix{{a, b}, {c, d}}; };
  // Frobenius norm below 1, hence contractions
  std::map<int, ExactMatrix> A;
  A[1] = mat(CQ(q(1, 2)), CQ(q(1, 4)), CQ(), CQ(q(-1, 3)));
  A[2] = mat(CQ(q(1, 3)), CQ(0, q(1, 5)), CQ(q(1, 5)), CQ(q(1, 2)));
  A[3] = mat(CQ(q(-1, 2)), CQ(q(1, 6)), CQ(q(1, 4), q(1, 4)), CQ(q(1, 4)));
  A[4] = mat(CQ(q(1, 4)), CQ(q(-1, 3)), CQ(q(1, 3)), CQ(q(1, 5), q(-1, 5)));
  const std::vector<Tuple> tuples = {{parse_word("a1 u1 a2 u1^-1")},
                                     {parse_word("a1 u1 a2 u1^-1"), parse_word("a3 u1 a4 u1^-1")}};
  const std::vector<int> Ns = {8, 16, 32};
  for (const auto& P : tuples) {
    const int l = static_cast<int>(P.size());
    ConvergenceRow row;
    row.tuple = tuple_str(P);
    row.N = Ns;
    CQ m0 = evaluate_exact(genus_coefficient(0, P), A), m1 = evaluate_exact(genus_coefficient(1, P), A);
    bool all_zero = true;
    for (int N : Ns) {
      CQ c = evaluate_exact(cumulant_haar(P, N), A);
      mpq_class scale = l >= 2 ? mpq_class(static_cast<long>(std::pow(N, l - 2))) : mpq_class(1, static_cast<long>(std::pow(N, 2 - l)));
      CQ res = c * CQ(scale) - m0 - m1 * CQ(mpq_class(1, static_cast<long>(N) * N));
      all_zero = all_zero && res.is_zero();
      row.residual.push_back(std::hypot(res.re.get_d(), res.im.get_d()));
    }
    row.exact_zero = all_zero;
    for (size_t k = 0; k + 1 < Ns.size(); ++k) {
      double r = row.residual[k + 1] > 0 ? row.residual[k] / row.residual[k + 1] : NAN;
      row.ratio.push_back(r);
      if (all_zero) continue;
      ++rep.checked;
      if (!(r >= 8 && r <= 32)) rep.fail(row.tuple + " ratio " + std::to_string(r) + " at N=" + std::to_string(Ns[k]));
    }
    if (all_zero) {
      // the truncated series is exact here, so there is no ratio to measure
      ++rep.checked;
      rep.details[row.tuple] = "residual exactly 0 at every N";
    }
    if (rows) rows->push_back(row);
  }
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- Hurwitz

GridReport hurwitz_grid(int G, int max_m, int max_l, int threads) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "hurwitz";
  std::vector<Tuple> tuples;
  auto build = [](const std::vector<int>& parts, bool rotated) {
    Tuple t;
    int slot = 0;
    for (int mi : parts) {
      Word w;
      for (int k = 0; k < mi; ++k) {
        w.push_back(Letter::a(++slot));
        w.push_back(Letter::u(1));
        w.push_back(Letter::a(++slot));
        w.push_back(Letter::uinv(1));
      }
      t.push_back(rotated ? rotate(w, 1) : w);
    }
    return t;
  };
  long hciz = 0;
  for (int m = 1; m <= max_m; ++m) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int left) {
      if (left == 0) {
        tuples.push_back(build(cur, false));
        tuples.push_back(build(cur, true));
        return;
      }
      if (static_cast<int>(cur.size()) == max_l) return;
      for (int p = 1; p <= left; ++p) {
        cur.push_back(p);
        rec(left - p);
        cur.pop_back();
      }
    };
    rec(m);
    if (m > max_l) tuples.push_back(build(std::vector<int>(m, 1), false));
  }
  for (const auto& t : tuples)
    if (std::all_of(t.begin(), t.end(), [](const Word& w) { return degree(w) == 2; })) ++hciz;
  std::vector<Outcome> out(tuples.size());
  parallel_for(static_cast<long>(tuples.size()), threads, [&](long i) {
    for (int g = 0; g <= G; ++g) {
      TraceExpr h = hurwitz_reduction(g, tuples[i]);
      ++out[i].checked;
      if (!h.is_zero()) ++out[i].nonzero;
      if (!(h == genus_coefficient(g, tuples[i])))
        out[i].failures.push_back("g=" + std::to_string(g) + " " + tuple_str(tuples[i]));
    }
  });
  absorb(rep, out);
  rep.details["hciz_tuples"] = std::to_string(hciz);
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- prop-M0

GridReport prop_m0_grid(int G, int max_deg, int max_l, int colors, int threads) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "prop-M0";
  auto tuples = generic_tuples(1, max_deg, max_l, colors);
  std::vector<Outcome> out(tuples.size());
  parallel_for(static_cast<long>(tuples.size()), threads, [&](long i) {
    const Tuple& P = tuples[i];
    Outcome& o = out[i];
    const int l = static_cast<int>(P.size());
    auto expect = [&](bool ok, const std::string& what, int g) {
      ++o.checked;
      if (!ok) o.failures.push_back(what + " g=" + std::to_string(g) + " " + tuple_str(P));
    };
    for (int g = 0; g <= G; ++g) {
      TraceExpr base = genus_coefficient(g, P);
      if (!base.is_zero()) ++o.nonzero;
      Tuple canon;
      for (const auto& w : P) canon.push_back(rotate_to_unitary_end(w));
      for (int j = 0; j < l; ++j)
        for (int k = 1; k < static_cast<int>(P[j].size()); ++k) {
          Word r = rotate(P[j], k);
          if (!r.back().is_unitary() || r == canon[j]) continue;
          Tuple t = canon;
          t[j] = r;
          expect(genus_coefficient_at(g, t) == base, "traciality", g);
        }
      std::vector<int> order(l);
      std::iota(order.begin(), order.end(), 0);
      while (std::next_permutation(order.begin(), order.end())) {
        Tuple t;
        for (int k : order) t.push_back(P[k]);
        expect(genus_coefficient(g, t) == base, "symmetry", g);
      }
      for (int c = 1; c <= colors; ++c)
        for (int s : {1, -1}) {
          Tuple t = P;
          Letter in = s > 0 ? Letter::uinv(c) : Letter::u(c), outl = s > 0 ? Letter::u(c) : Letter::uinv(c);
          t.back() = concat(concat({in}, P.back()), {outl});
          expect(genus_coefficient(g, t) == base, "simplification", g);
        }
      Tuple adj;
      for (const auto& w : P) adj.push_back(adjoint(w));
      expect(genus_coefficient(g, adj) == base.conj(), "conjugation", g);
    }
  });
  absorb(rep, out);
  rep.details["tuples"] = std::to_string(tuples.size());
  rep.seconds = since(t0);
  return rep;
}

GridReport bound01_grid(int max_deg, int colors) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "bound01";
  double worst = 0;
  std::vector<MatrixTuple> mats;
  std::vector<int> idx(max_deg);
  std::iota(idx.begin(), idx.end(), 1);
  for (std::uint64_t s = 1; s <= 3; ++s) mats.push_back(seeded_contractions(3, idx, s));
  for (const auto& t : generic_tuples(1, max_deg, 1, colors)) {
    TraceExpr M = genus_coefficient(0, t);
    CQ unit = M.unit_substitution();
    ++rep.checked;
    if (unit.re * unit.re + unit.im * unit.im > 1) rep.fail("unit traces " + tuple_str(t) + " = " + unit.str());
    for (const auto& A : mats) {
      double v = std::abs(evaluate_trace_expression(M, A.A, A.N));
      worst = std::max(worst, v);
      ++rep.checked;
      if (v > 1 + 1e-12) rep.fail("contractions " + tuple_str(t) + " |M| = " + std::to_string(v));
    }
  }
  rep.details["max_abs_at_contractions"] = std::to_string(worst);
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- coefficient bounds

GridReport bounds_grid(int G, int max_k, int max_total, int threads) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "bounds";
  const std::vector<Word> pool = {parse_word("a101 u1"), parse_word("a102 u1^-1"),
                                  parse_word("a103 u1 a104 u1^-1"), parse_word("a105 u1 a106 u1"),
                                  parse_word("a107 u1 a108 u1 a109 u1^-1 a110 u1^-1")};
  std::vector<Potential> pots;
  std::function<void(size_t, Potential&)> choose = [&](size_t from, Potential& V) {
    if (!V.q.empty()) pots.push_back(V);
    if (static_cast<int>(V.q.size()) == max_k) return;
    for (size_t i = from; i < pool.size(); ++i) {
      V.q.push_back(pool[i]);
      choose(i + 1, V);
      V.q.pop_back();
    }
  };
  Potential empty;
  choose(0, empty);
  struct Job {
    const Potential* V;
    Tuple P;
    std::vector<int> n;
    int g;
  };
  std::vector<Job> jobs;
  auto tuples = generic_tuples(1, max_total, max_total, 1);
  for (const auto& V : pots)
    for (const auto& P : tuples) {
      int m = 0;
      for (const auto& w : P) m += degree(w);
      for (const auto& n : multi_indices(static_cast<int>(V.q.size()), (max_total - m) / V.nu()))
        for (int g = 0; g <= G; ++g) jobs.push_back({&V, P, n, g});
    }
  std::vector<Outcome> out(jobs.size());
  std::vector<double> slack(jobs.size(), 0);
  parallel_for(static_cast<long>(jobs.size()), threads, [&](long i) {
    const Job& j = jobs[i];
    BoundReport b = bounds_check(j.g, j.P, *j.V, j.n);
    ++out[i].checked;
    if (b.lhs != 0) ++out[i].nonzero;
    if (b.rhs > 0) slack[i] = mpq_class(b.lhs / b.rhs).get_d();
    if (!b.holds()) {
      std::string n;
      for (int v : j.n) n += std::to_string(v) + ",";
      out[i].failures.push_back("g=" + std::to_string(j.g) + " n=(" + n + ") " + tuple_str(j.P));
    }
  });
  absorb(rep, out);
  std::ostringstream os;
  os << *std::max_element(slack.begin(), slack.end());
  rep.details["max_lhs_over_rhs"] = os.str();
  rep.details["potentials"] = std::to_string(pots.size());
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- operator identities

GridReport gradient_grid(int max_deg, int colors) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "gradient";
  auto M = [](int g, const Tuple& t) { return genus_coefficient(g, t); };
  const std::vector<std::pair<std::string, Bilinear>> forms = {
      {"M0_2", [&](const Word& x, const Word& y) { return M(0, {x, y}); }},
      {"M1_2", [&](const Word& x, const Word& y) { return M(1, {x, y}); }},
      {"M0_1 M0_1", [&](const Word& x, const Word& y) { return M(0, {x}) * M(0, {y}); }},
      {"M0_1 M1_1", [&](const Word& x, const Word& y) { return M(0, {x}) * M(1, {y}); }},
  };
  long nonzero = 0;
  for (const auto& t : generic_tuples(1, max_deg, 1, colors))
    for (int c : colors_of(t[0]))
      for (const auto& [name, mu2] : forms) {
        auto chk = gradient_trick_check(t[0], c, mu2);
        ++rep.checked;
        if (!chk.lhs.is_zero()) ++nonzero;
        if (!chk.equal()) rep.fail(name + " color " + std::to_string(c) + " " + format_word(t[0]));
      }
  rep.details["nonzero"] = std::to_string(nonzero);
  rep.seconds = since(t0);
  return rep;
}

GridReport master_grid(int max_deg) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "master";
  long nonzero = 0;
  auto run = [&](const Word& P1, const Word& P2) {
    auto chk = master_operator_check(P1, P2);
    ++rep.checked;
    if (!chk.lhs.is_zero()) ++nonzero;
    if (!chk.equal()) rep.fail(format_word(P1) + " | " + format_word(P2));
  };
  for (const auto& t : generic_tuples(1, max_deg, 2, 1)) {
    if (t.size() == 2) run(t[0], t[1]);
    else {
      run(Word{}, t[0]);
      run(Word{Letter::a(50)}, t[0]);
    }
  }
  rep.details["nonzero"] = std::to_string(nonzero);
  rep.seconds = since(t0);
  return rep;
}

GridReport norm_bound_grid(int count, double xi1, double xi2, std::uint64_t seed) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "norm-bound";
  MatrixTuple A = seeded_contractions(3, {1, 2}, seed);
  std::map<Word, std::complex<double>> memo;
  auto tau = [&](const Word& w) {
    auto it = memo.find(w);
    if (it == memo.end()) it = memo.emplace(w, evaluate_trace_expression(genus_coefficient(0, {w}), A.A, A.N)).first;
    return it->second;
  };
  Philox4x32 rng(seed, 0x7A0B0ull);
  const std::vector<Letter> alphabet = {Letter::a(1), Letter::a(2), Letter::astar(1), Letter::u(1), Letter::uinv(1)};
  double worst = 0;
  for (int s = 0; s < count; ++s) {
    Poly P;
    int terms = 1 + static_cast<int>(random_below(rng, 4));
    for (int t = 0; t < terms; ++t) {
      Word w;
      int len = 1 + static_cast<int>(random_below(rng, 8));
      for (int k = 0; k < len; ++k) {
        Letter x = alphabet[random_below(rng, static_cast<long>(alphabet.size()))];
        if (x.is_unitary() && degree(w) == 5) continue;
        w.push_back(x);
      }
      CQ c(mpq_class(random_below(rng, 19) - 9, 1 + random_below(rng, 6)), mpq_class(random_below(rng, 7) - 3, 2));
      P.add(w, c);
    }
    // first pass evaluates τ on every word the operator touches; its ξ₁-norm over those words
    // is the smallest constant the inequality may use
    operator_norm_bound_check(tau, 1.0, xi1, xi2, P);
    double tau_norm = 0;
    for (const auto& [w, v] : memo) tau_norm = std::max(tau_norm, std::abs(v) / std::pow(xi1, degree(w)));
    auto r = operator_norm_bound_check(tau, tau_norm, xi1, xi2, P);
    ++rep.checked;
    if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
    if (!r.holds()) rep.fail(P.str());
  }
  rep.details["max_lhs_over_rhs"] = std::to_string(worst);
  rep.seconds = since(t0);
  return rep;
}

// ----------------------------------------------------------------- Monte Carlo

GridReport mc_grid(const std::vector<int>& Ns, long samples, int words, std::uint64_t seed, double k_sigma,
                   double min_fraction, int threads, std::vector<McCell>* cells) {
  auto t0 = Clock::now();
  GridReport rep;
  rep.name = "monte-carlo";
  // seeded balanced words of unitary degree 2 or 4 over a1..a4, u1, u2
  std::vector<Word> seeded;
  Philox4x32 rng(seed, 0x5EEDull);
  for (int i = 0; i < words; ++i) {
    int pairs = 1 + static_cast<int>(random_below(rng, 2));
    std::vector<Letter> us;
    for (int p = 0; p < pairs; ++p) {
      int c = 1 + static_cast<int>(random_below(rng, 2));
      us.push_back(Letter::u(c));
      us.push_back(Letter::uinv(c));
    }
    for (int k = static_cast<int>(us.size()) - 1; k > 0; --k) std::swap(us[k], us[random_below(rng, k + 1)]);
    Word w;
    for (const auto& u : us) {
      long pick = random_below(rng, 6);
      if (pick < 4) w.push_back(Letter::a(1 + static_cast<int>(pick)));
      else if (pick == 4) w.push_back(Letter::astar(1 + static_cast<int>(random_below(rng, 4))));
      w.push_back(u);
    }
    seeded.push_back(w);
  }
  long within = 0, total = 0;
  for (int N : Ns) {
    MatrixTuple A = seeded_contractions(N, {1, 2, 3, 4}, seed + static_cast<std::uint64_t>(N));
    SamplingOptions opt;
    opt.samples = samples;
    opt.seed = seed * 1000 + static_cast<std::uint64_t>(N);
    opt.threads = threads;
    auto record = [&](const std::string& label, SampleReport r, double scale) {
      McCell c{label, N, r.estimate / scale, r.target / scale, r.std_error / scale, r.sigma_distance};
      ++total;
      if (c.sigma <= k_sigma) ++within;
      else rep.failing.push_back(label + " N=" + std::to_string(N) + " at " + std::to_string(c.sigma) + " sigma");
      if (cells) cells->push_back(c);
    };
    record("E|Tr U|^2", empirical_joint_moment({parse_word("u1"), parse_word("u1^-1")}, A, opt), 1);
    record("E tr(a1 U a2 U*)", empirical_joint_moment({parse_word("a1 u1 a2 u1^-1")}, A, opt), N);
    record("c2(Tr u, Tr u*)", empirical_joint_cumulant({parse_word("u1"), parse_word("u1^-1")}, A, opt), 1);
    for (const auto& w : seeded) record("E Tr(" + format_word(w) + ")", empirical_joint_moment({w}, A, opt), 1);
  }
  rep.checked = total;
  double frac = total ? static_cast<double>(within) / static_cast<double>(total) : 0;
  if (frac < min_fraction) rep.failures = total - within;
  rep.details["within"] = std::to_string(within) + "/" + std::to_string(total);
  rep.seconds = since(t0);
  return rep;
}

}  // namespace umap
