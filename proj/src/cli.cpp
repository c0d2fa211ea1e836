#include "umap/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "umap/expansion.hpp"
#include "umap/grids.hpp"
#include "umap/maps.hpp"
#include "umap/oracle.hpp"
#include "umap/walks.hpp"
#include "umap/weingarten.hpp"

namespace umap::cli {

using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string format = "pretty";
  int threads = 1;
  long max_work = 0;
};

struct IdentityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// One JSON object as a two-line CSV (header, row); nested values are JSON-encoded.
std::string object_csv(const json& j) {
  std::string head, row;
  bool first = true;
  for (const auto& [k, v] : j.items()) {
    head += (first ? "" : ",") + csv_field(k);
    row += (first ? "" : ",") + csv_field(scalar_text(v));
    first = false;
  }
  return head + "\n" + row + "\n";
}

std::string rows_csv(const json& rows) {
  if (rows.empty()) return "";
  std::string s;
  bool first = true;
  for (const auto& [k, v] : rows.front().items()) s += (first ? "" : ",") + csv_field(k), first = false;
  s += "\n";
  for (const auto& r : rows) {
    first = true;
    for (const auto& [k, v] : r.items()) s += (first ? "" : ",") + csv_field(scalar_text(v)), first = false;
    s += "\n";
  }
  return s;
}

void emit(std::ostream& out, const Globals& G, const json& j, const std::string& pretty) {
  if (G.format == "json") out << j.dump() << "\n";
  else if (G.format == "csv") out << (j.is_array() ? rows_csv(j) : object_csv(j));
  else out << pretty << (pretty.empty() || pretty.back() == '\n' ? "" : "\n");
}

Tuple parse_tuple(const std::vector<std::string>& words) {
  Tuple t;
  for (const auto& w : words) t.push_back(parse_word(w));
  return t;
}

json tuple_json(const Tuple& P) {
  json a = json::array();
  for (const auto& w : P) a.push_back(format_word(w));
  return a;
}

json trace_json(const TraceExpr& T) {
  json terms = json::array();
  for (const auto& [mono, c] : T.terms()) {
    std::string cs = sgn(c.im) != 0 ? "(" + c.str() + ")" : c.str();
    terms.push_back(mono.empty() ? cs : cs + " * " + format_monomial(mono));
  }
  return terms;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

MatrixTuple load_matrices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j = json::parse(in);
  MatrixTuple T;
  T.N = j.at("N").get<int>();
  for (const auto& [key, rows] : j.at("A").items()) {
    int idx = std::stoi(key);
    Eigen::MatrixXcd M(T.N, T.N);
    if (static_cast<int>(rows.size()) != T.N) throw std::invalid_argument("matrix a" + key + " has wrong row count");
    for (int r = 0; r < T.N; ++r) {
      if (static_cast<int>(rows[r].size()) != T.N) throw std::invalid_argument("matrix a" + key + " has wrong column count");
      for (int c = 0; c < T.N; ++c) {
        const auto& e = rows[r][c];
        M(r, c) = e.is_array() ? std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>())
                               : std::complex<double>(e.get<double>(), 0);
      }
    }
    T.A[idx] = M;
  }
  T.validate();
  return T;
}

std::vector<int> det_indices(const Tuple& P) {
  std::set<int> s;
  for (const auto& w : P)
    for (const auto& l : w)
      if (!l.is_unitary()) s.insert(l.index);
  return {s.begin(), s.end()};
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> v;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) v.push_back(std::stoi(cur)), cur.clear();
    } else cur += c;
  }
  return v;
}

json map_json(const UnitaryTypeMap& m) {
  json walks = json::object();
  for (const auto& [c, w] : m.walks) {
    json steps = json::array();
    for (const auto& t : w.steps) steps.push_back(json::array({t.i, t.j}));
    walks[std::to_string(c)] = steps;
  }
  return json{{"labels", m.labels}, {"rho", m.rho.str()}, {"eps", m.eps.signs()},
              {"colors", m.colors}, {"pi", m.pi.str()}, {"walks", walks}};
}

UnitaryTypeMap map_from_json(const json& j) {
  auto labels = j.at("labels").get<std::vector<int>>();
  std::vector<int> colors = j.contains("colors") ? j.at("colors").get<std::vector<int>>() : std::vector<int>(labels.size(), 1);
  SignVector eps(labels, j.at("eps").get<std::vector<int>>());
  std::map<int, MonotoneWalk> walks;
  for (const auto& [c, steps] : j.at("walks").items()) {
    MonotoneWalk w;
    for (const auto& s : steps) w.steps.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
    walks[std::stoi(c)] = w;
  }
  return build_map(Permutation::parse(j.at("rho").get<std::string>(), labels), eps, colors,
                   Permutation::parse(j.at("pi").get<std::string>(), labels), walks);
}

json report_json(const GridReport& r) {
  json d = json::object();
  for (const auto& [k, v] : r.details) d[k] = v;
  return json{{"check", r.name}, {"checked", r.checked}, {"failures", r.failures},
              {"ok", r.ok()}, {"failing", r.failing}, {"details", d}};
}

std::string report_text(const GridReport& r) {
  std::ostringstream os;
  os << r.name << ": " << (r.ok() ? "ok" : "FAILED") << ", " << r.checked << " checked, " << r.failures << " failed";
  for (const auto& [k, v] : r.details) os << ", " << k << " " << v;
  for (const auto& f : r.failing) os << "\n  " << f;
  return os.str();
}

void emit_reports(std::ostream& out, const Globals& G, const std::vector<GridReport>& reps) {
  json arr = json::array();
  std::string text;
  bool ok = true;
  for (const auto& r : reps) {
    arr.push_back(report_json(r));
    text += report_text(r) + "\n";
    ok = ok && r.ok();
  }
  if (G.format == "csv") {
    for (auto& row : arr) row["failing"] = row["failing"].dump(), row["details"] = row["details"].dump();
  }
  emit(out, G, reps.size() == 1 && G.format == "json" ? arr.front() : arr, text);
  if (!ok) throw IdentityFailure("check failed");
}

void emit_identity(std::ostream& out, const Globals& G, const std::string& what, const IdentityCheck& c) {
  json j{{"check", what}, {"equal", c.equal()}, {"lhs", trace_json(c.lhs)}, {"rhs", trace_json(c.rhs)}};
  emit(out, G, j, what + ": " + (c.equal() ? "equal" : "NOT equal") + "\n  lhs = " + c.lhs.str() + "\n  rhs = " + c.rhs.str());
  if (!c.equal()) throw IdentityFailure(what);
}

Permutation of_type(const std::vector<int>& type) {
  std::vector<std::vector<int>> cyc;
  int next = 1;
  for (int len : type) {
    std::vector<int> c;
    for (int k = 0; k < len; ++k) c.push_back(next++);
    cyc.push_back(c);
  }
  return Permutation::from_cycles(iota_labels(next - 1), cyc);
}

std::string type_text(const std::vector<int>& t) {
  std::string s;
  for (size_t k = 0; k < t.size(); ++k) s += (k ? "+" : "") + std::to_string(t[k]);
  return s;
}

}  // namespace

std::string poly_to_json(const Poly& P) {
  json terms = json::array();
  for (const auto& [w, c] : P.terms()) {
    json letters = json::array();
    for (const Letter& l : w) letters.push_back(l.str());
    terms.push_back({{"coeff", {c.re.get_str(), c.im.get_str()}}, {"word", letters}});
  }
  return json{{"terms", terms}}.dump();
}

Poly poly_from_json(const std::string& text) {
  json j = json::parse(text);
  auto rational = [](const json& v) {
    mpq_class q;
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (!v.is_string() || q.set_str(v.get<std::string>(), 10) != 0)
      throw std::invalid_argument("polynomial JSON: coefficients must be integers or rational strings");
    if (q.get_den() == 0) throw std::invalid_argument("polynomial JSON: zero denominator");
    q.canonicalize();
    return q;
  };
  Poly P;
  for (const auto& t : j.at("terms")) {
    const auto& c = t.at("coeff");
    if (!c.is_array() || c.size() != 2) throw std::invalid_argument("polynomial JSON: coeff must be [re, im]");
    std::string word;
    for (const auto& l : t.at("word")) word += l.get<std::string>() + " ";
    P.add(word.empty() ? Word{} : parse_word(word), CQ(rational(c[0]), rational(c[1])));
  }
  return P;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Haar-unitary integrals, maps of unitary type and their topological expansion", "umap"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  Globals G;
  G.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--format", G.format, "output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("--threads", G.threads, "worker threads (output does not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--max-work", G.max_work, "cap on |S^(eps)| iterated by enumerations, 0 = none")->check(CLI::NonNegativeNumber);

  std::function<void()> action;

  // wg
  int wq = 0, wn = 0;
  std::string wclass;
  std::optional<int> wseries;
  auto* wg = app.add_subcommand("wg", "exact Weingarten function Wg_N on S_q");
  wg->add_option("--q", wq, "order of the symmetric group")->required()->check(CLI::PositiveNumber);
  wg->add_option("--n", wn, "dimension N")->required()->check(CLI::PositiveNumber);
  wg->add_option("--class", wclass, "cycle type such as 2+1 (all classes when omitted)");
  wg->add_option("--series", wseries, "also print the partial sum of the 1/N series up to R")->check(CLI::NonNegativeNumber);
  wg->callback([&] {
    action = [&] {
      std::vector<std::vector<int>> types;
      if (!wclass.empty()) {
        auto t = parse_cycle_type(wclass);
        if (std::accumulate(t.begin(), t.end(), 0) != wq) throw std::invalid_argument("class does not partition q");
        std::sort(t.rbegin(), t.rend());
        types.push_back(t);
      } else types = partitions_of(wq);
      json rows = json::array();
      std::string text;
      for (const auto& t : types) {
        Permutation pi = of_type(t);
        mpq_class v = weingarten_exact(pi, wn);
        json row{{"q", wq}, {"N", wn}, {"class", type_text(t)}, {"value", v.get_str()}};
        std::string line = types.size() > 1 ? type_text(t) + ": " + v.get_str() : v.get_str();
        if (wseries) {
          mpq_class s = weingarten_series_partial(pi, wn, *wseries);
          mpq_class d = s - v;
          row["series_R"] = *wseries;
          row["series"] = s.get_str();
          row["difference"] = d.get_d();
          std::ostringstream os;
          os << "  series(R=" << *wseries << ") = " << s.get_d() << ", difference " << d.get_d();
          line += os.str();
        }
        rows.push_back(row);
        text += line + "\n";
      }
      emit(out, G, types.size() == 1 && G.format == "json" ? rows.front() : rows, text);
    };
  });

  // moment / cumulant / genus-coeff
  int mn = 0;
  std::vector<std::string> mwords;
  std::string mmat;
  auto add_tuple = [&](CLI::App* sc) {
    sc->add_option("words", mwords, "one word per trace, e.g. \"a1 u1 a2 u1^-1\"")->required();
  };
  auto* mo = app.add_subcommand("moment", "exact E[Tr P1 ... Tr Pl] under Haar unitaries");
  mo->add_option("--n", mn, "dimension N")->required()->check(CLI::PositiveNumber);
  mo->add_option("--matrices", mmat, "JSON file of deterministic matrices for a numeric value");
  add_tuple(mo);
  auto* cu = app.add_subcommand("cumulant", "exact joint cumulant c_l(Tr P1, ..., Tr Pl)");
  cu->add_option("--n", mn, "dimension N")->required()->check(CLI::PositiveNumber);
  cu->add_option("--matrices", mmat, "JSON file of deterministic matrices for a numeric value");
  add_tuple(cu);
  auto exact_value = [&](const std::string& what, bool cumulant) {
    return [&, what, cumulant] {
      Tuple P = parse_tuple(mwords);
      TraceExpr T = cumulant ? cumulant_haar(P, mn) : moment_haar(P, mn);
      json j{{what, tuple_json(P)}, {"N", mn}, {"value", T.str()}, {"terms", trace_json(T)}};
      std::string text = T.str();
      if (!mmat.empty()) {
        MatrixTuple A = load_matrices(mmat);
        if (A.N != mn) throw std::invalid_argument("matrices file has N = " + std::to_string(A.N));
        auto z = evaluate_trace_expression(T, A.A, A.N);
        j["numeric"] = complex_json(z);
        std::ostringstream os;
        os << "\n  numeric: " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
        text += os.str();
      }
      emit(out, G, j, text);
    };
  };
  mo->callback([&] { action = exact_value("moment", false); });
  cu->callback([&] { action = exact_value("cumulant", true); });

  int gg = 0;
  bool by_enum = false;
  auto* gc = app.add_subcommand("genus-coeff", "genus-g coefficient M^(g)_{0,l}(P1, ..., Pl)");
  gc->add_option("--g", gg, "genus")->required()->check(CLI::NonNegativeNumber);
  gc->add_flag("--by-enumeration", by_enum, "sum over explicitly enumerated maps");
  add_tuple(gc);
  gc->callback([&] {
    action = [&] {
      Tuple P = parse_tuple(mwords);
      TraceExpr T = by_enum ? genus_coefficient_by_enumeration(gg, P) : genus_coefficient(gg, P);
      emit(out, G, json{{"g", gg}, {"tuple", tuple_json(P)}, {"value", T.str()}, {"terms", trace_json(T)}}, T.str());
    };
  });

  // poly
  std::string ptext, pfile;
  auto* po = app.add_subcommand("poly", "normalize a polynomial; JSON output round-trips through --from-json");
  po->add_option("polynomial", ptext, "polynomial such as \"2 * a1 u1 + 1/2 * u1^-1\"");
  po->add_option("--from-json", pfile, "read the polynomial from a JSON file");
  po->callback([&] {
    action = [&] {
      if (ptext.empty() == pfile.empty()) throw std::invalid_argument("give either a polynomial or --from-json");
      Poly P;
      if (!pfile.empty()) {
        std::ifstream in(pfile);
        if (!in) throw std::invalid_argument("cannot open " + pfile);
        std::stringstream ss;
        ss << in.rdbuf();
        P = poly_from_json(ss.str());
      } else P = Poly::parse(ptext);
      if (G.format == "json") out << poly_to_json(P) << "\n";
      else out << P.str() << "\n";
    };
  });

  // enumerate-maps
  int en = 0;
  std::string eeps, erho, ecolors, evalidate;
  std::optional<int> er, egenus;
  bool econn = false;
  auto* em = app.add_subcommand("enumerate-maps", "stream maps of unitary type as newline-delimited JSON");
  em->add_option("--labels", en, "label set {1..n}")->check(CLI::PositiveNumber);
  em->add_option("--eps", eeps, "signs, e.g. +-+-");
  em->add_option("--rho", erho, "white-vertex permutation in cycle notation");
  em->add_option("--colors", ecolors, "comma-separated color per label (default all 1)");
  auto* ropt = em->add_option("--r", er, "number of black vertices")->check(CLI::NonNegativeNumber);
  em->add_option("--genus", egenus, "genus filter instead of --r")->check(CLI::NonNegativeNumber)->excludes(ropt);
  em->add_flag("--connected", econn, "connected maps only");
  em->add_option("--validate", evalidate, "read maps (NDJSON) from a file, validate and re-emit them");
  em->callback([&] {
    action = [&] {
      std::vector<UnitaryTypeMap> maps;
      if (!evalidate.empty()) {
        std::ifstream in(evalidate);
        if (!in) throw std::invalid_argument("cannot open " + evalidate);
        for (std::string line; std::getline(in, line);)
          if (!line.empty()) maps.push_back(map_from_json(json::parse(line)));
      } else {
        if (en == 0 || eeps.empty() || erho.empty() || (!er && !egenus))
          throw CLI::ValidationError("enumerate-maps", "--labels, --eps, --rho and one of --r/--genus are required");
        auto I = iota_labels(en);
        SignVector eps = SignVector::parse(eeps);
        if (static_cast<int>(eps.domain().size()) != en) throw std::invalid_argument("--eps length differs from --labels");
        std::vector<int> colors = ecolors.empty() ? std::vector<int>(en, 1) : parse_int_list(ecolors);
        if (static_cast<int>(colors.size()) != en) throw std::invalid_argument("--colors length differs from --labels");
        EnumerateOptions opt;
        opt.r = er;
        opt.genus = egenus;
        opt.connected_only = econn;
        opt.max_work = G.max_work;
        maps = enumerate_maps(I, eps, Permutation::parse(erho, I), colors, opt);
      }
      if (G.format == "csv") {
        out << "labels,rho,eps,colors,pi,walks\n";
        for (const auto& m : maps) {
          json j = map_json(m);
          out << csv_field(j["labels"].dump()) << "," << csv_field(m.rho.str()) << "," << m.eps.str() << ","
              << csv_field(j["colors"].dump()) << "," << csv_field(m.pi.str()) << "," << csv_field(j["walks"].dump()) << "\n";
        }
      } else {
        for (const auto& m : maps) out << map_json(m).dump() << "\n";
      }
    };
  });

  // hurwitz
  int hm = 0, hg = 0;
  std::optional<int> hr;
  std::string hrho, hgamma, hsigma;
  auto* hu = app.add_subcommand("hurwitz", "monotone triple Hurwitz numbers as CSV");
  hu->add_option("--m", hm, "size of the label set [m]")->required()->check(CLI::PositiveNumber);
  auto* hgo = hu->add_option("--g", hg, "rows for genus 0..g (default 0)")->check(CLI::NonNegativeNumber);
  hu->add_option("--r", hr, "a single walk length instead of a genus range")->check(CLI::NonNegativeNumber)->excludes(hgo);
  hu->add_option("--rho", hrho, "rho in cycle notation (default: all class representatives)");
  hu->add_option("--gamma", hgamma, "gamma in cycle notation (default: all class representatives)");
  hu->add_option("--sigma", hsigma, "sigma in cycle notation (default: all class representatives)");
  hu->callback([&] {
    action = [&] {
      auto I = iota_labels(hm);
      auto choices = [&](const std::string& text) {
        std::vector<Permutation> v;
        if (!text.empty()) v.push_back(Permutation::parse(text, I));
        else
          for (const auto& t : partitions_of(hm)) v.push_back(of_type(t));
        return v;
      };
      json rows = json::array();
      for (const auto& rho : choices(hrho))
        for (const auto& gamma : choices(hgamma))
          for (const auto& sigma : choices(hsigma)) {
            int base = rho.num_cycles() + gamma.num_cycles() + sigma.num_cycles() - hm - 2;
            std::vector<std::pair<int, int>> gr;  // (g, r)
            if (hr) {
              if ((*hr - base) % 2 == 0 && *hr >= base) gr.emplace_back((*hr - base) / 2, *hr);
              else gr.emplace_back(-1, *hr);
            } else
              for (int g = 0; g <= hg; ++g)
                if (base + 2 * g >= 0) gr.emplace_back(g, base + 2 * g);
            for (auto [g, r] : gr) {
              mpz_class c = g < 0 ? mpz_class(0) : monotone_triple_hurwitz(rho, gamma, sigma, r);
              rows.push_back(json{{"m", hm},
                                  {"rho", rho.str()},
                                  {"gamma", gamma.str()},
                                  {"sigma", sigma.str()},
                                  {"rho_type", type_text(rho.cycle_type())},
                                  {"gamma_type", type_text(gamma.cycle_type())},
                                  {"sigma_type", type_text(sigma.cycle_type())},
                                  {"g", g < 0 ? json(nullptr) : json(g)},
                                  {"r", r},
                                  {"count", c.get_str()}});
            }
          }
      if (G.format == "json") out << rows.dump() << "\n";
      else out << rows_csv(rows);
    };
  });

  // identity checks
  int tg = 0, tmax_deg = 6, tmax_l = 3, tcolors = 2;
  std::optional<int> tcolor;
  bool tgrid = false;
  std::string tform = "both";
  std::vector<std::string> twords;
  auto* tc = app.add_subcommand("tutte-check", "Tutte-type recursion for genus coefficients");
  tc->add_option("--g", tg, "genus (the grid covers 0..g)")->required()->check(CLI::NonNegativeNumber);
  tc->add_flag("--grid", tgrid, "run every generic tuple up to --max-deg, --max-l, --colors");
  tc->add_option("--max-deg", tmax_deg, "grid: total unitary degree bound")->check(CLI::PositiveNumber);
  tc->add_option("--max-l", tmax_l, "grid: tuple length bound")->check(CLI::PositiveNumber);
  tc->add_option("--colors", tcolors, "grid: number of unitary colors")->check(CLI::PositiveNumber);
  tc->add_option("--color", tcolor, "color of the derivative (default: every color of the last entry)");
  tc->add_option("--form", tform, "tensor, recursion or both")->check(CLI::IsMember({"tensor", "recursion", "both"}));
  tc->add_option("words", twords, "tuple P1 ... Pl");
  tc->callback([&] {
    action = [&] {
      if (tgrid) return emit_reports(out, G, {tutte_grid(tg, tmax_deg, tmax_l, tcolors, G.threads)});
      if (twords.empty()) throw CLI::ValidationError("tutte-check", "give a tuple or --grid");
      Tuple P = parse_tuple(twords);
      bool all_ok = true;
      json arr = json::array();
      std::string text;
      auto add = [&](const std::string& what, const IdentityCheck& c) {
        all_ok = all_ok && c.equal();
        arr.push_back(json{{"check", what}, {"equal", c.equal()}, {"lhs", trace_json(c.lhs)}, {"rhs", trace_json(c.rhs)}});
        text += what + ": " + (c.equal() ? "equal" : "NOT equal") + "\n  lhs = " + c.lhs.str() + "\n  rhs = " + c.rhs.str() + "\n";
      };
      if (tform != "recursion") {
        std::vector<int> cs = tcolor ? std::vector<int>{*tcolor} : colors_of(P.back());
        for (int c : cs) add("tensor color " + std::to_string(c), tutte_check(tg, P, c));
      }
      bool ends_in_u = P.back().back().kind == LetterKind::unitary;
      if (tform == "recursion" || (tform == "both" && ends_in_u)) add("recursion", tutte_recursion_check(tg, P));
      emit(out, G, arr, text);
      if (!all_ok) throw IdentityFailure("tutte");
    };
  });

  int hcg = 0, hc_max_m = 4, hc_max_l = 2;
  bool hcgrid = false;
  std::vector<std::string> hcwords;
  auto* hc = app.add_subcommand("hurwitz-check", "Hurwitz-number reduction against the genus coefficient");
  hc->add_option("--g", hcg, "genus (the grid covers 0..g)")->check(CLI::NonNegativeNumber);
  hc->add_flag("--grid", hcgrid, "run every alternated tuple up to --max-m, --max-l");
  hc->add_option("--max-m", hc_max_m, "grid: bound on m")->check(CLI::PositiveNumber);
  hc->add_option("--max-l", hc_max_l, "grid: tuple length bound")->check(CLI::PositiveNumber);
  hc->add_option("words", hcwords, "alternated words B1 u C1 u^-1 ...");
  hc->callback([&] {
    action = [&] {
      if (hcgrid) return emit_reports(out, G, {hurwitz_grid(hcg, hc_max_m, hc_max_l, G.threads)});
      if (hcwords.empty()) throw CLI::ValidationError("hurwitz-check", "give a tuple or --grid");
      Tuple P = parse_tuple(hcwords);
      emit_identity(out, G, "hurwitz", IdentityCheck{hurwitz_reduction(hcg, P), genus_coefficient(hcg, P)});
    };
  });

  int bg = 0, bmax_k = 2, bmax_total = 6;
  bool bgrid = false;
  std::vector<std::string> bpot, bwords;
  std::string bn;
  auto* bc = app.add_subcommand("bounds-check", "explicit coefficient bounds");
  bc->add_option("--g", bg, "genus (the grid covers 0..g)")->check(CLI::NonNegativeNumber);
  bc->add_flag("--grid", bgrid, "run the exhaustive grid up to --max-k, --max-total");
  bc->add_option("--max-k", bmax_k, "grid: number of potential monomials")->check(CLI::PositiveNumber);
  bc->add_option("--max-total", bmax_total, "grid: bound on m + nu |n|")->check(CLI::PositiveNumber);
  bc->add_option("--potential", bpot, "potential monomial q_i (repeatable)");
  bc->add_option("--z", bn, "multi-index n, comma separated");
  bc->add_option("words", bwords, "tuple P1 ... Pl");
  bc->callback([&] {
    action = [&] {
      if (bgrid) return emit_reports(out, G, {bounds_grid(bg, bmax_k, bmax_total, G.threads)});
      if (bwords.empty()) throw CLI::ValidationError("bounds-check", "give a tuple or --grid");
      Potential V;
      for (const auto& q : bpot) V.q.push_back(parse_word(q));
      std::vector<int> n = bn.empty() ? std::vector<int>(V.q.size(), 0) : parse_int_list(bn);
      auto r = bounds_check(bg, parse_tuple(bwords), V, n);
      json j{{"lhs", r.lhs.get_str()}, {"rhs", r.rhs.get_str()}, {"holds", r.holds()}};
      std::ostringstream os;
      os << "lhs = " << r.lhs.get_str() << "\nrhs = " << r.rhs.get_d() << "\n" << (r.holds() ? "holds" : "VIOLATED");
      emit(out, G, j, os.str());
      if (!r.holds()) throw IdentityFailure("bounds");
    };
  });

  bool mgrid = false;
  int mmax_deg = 4;
  std::string mwhat = "master";
  std::vector<std::string> mcwords;
  auto* mc = app.add_subcommand("master-check", "master-operator, gradient-trick and operator-norm checks");
  mc->add_flag("--grid", mgrid, "run the grid up to --max-deg");
  mc->add_option("--max-deg", mmax_deg, "grid: degree bound")->check(CLI::PositiveNumber);
  mc->add_option("--what", mwhat, "master, gradient, norm or all")->check(CLI::IsMember({"master", "gradient", "norm", "all"}));
  mc->add_option("words", mcwords, "P1 P2 for a single master-operator check");
  mc->callback([&] {
    action = [&] {
      if (mgrid) {
        std::vector<GridReport> reps;
        if (mwhat == "master" || mwhat == "all") reps.push_back(master_grid(mmax_deg));
        if (mwhat == "gradient" || mwhat == "all") reps.push_back(gradient_grid(mmax_deg, 2));
        if (mwhat == "norm" || mwhat == "all") reps.push_back(norm_bound_grid(200, 2, 4, 7));
        return emit_reports(out, G, reps);
      }
      if (mcwords.size() != 2) throw CLI::ValidationError("master-check", "give P1 P2 or --grid");
      emit_identity(out, G, "master", master_operator_check(parse_word(mcwords[0]), parse_word(mcwords[1])));
    };
  });

  // mc-verify
  std::vector<std::string> vwords;
  int vn = 4;
  long vsamples = 10000;
  std::uint64_t vseed = 1;
  std::string vmat, vstat = "cumulant";
  double vk = 4;
  bool vgrid = false;
  auto* mv = app.add_subcommand("mc-verify", "Monte Carlo estimate against the exact prediction");
  mv->add_option("--word", vwords, "word of the tuple (repeatable)");
  mv->add_option("--n", vn, "dimension N")->check(CLI::PositiveNumber);
  mv->add_option("--samples", vsamples, "number of Haar samples")->check(CLI::Range(2L, 100000000L));
  mv->add_option("--seed", vseed, "Philox key");
  mv->add_option("--matrices", vmat, "JSON file {\"N\":..,\"A\":{\"1\":[[[re,im],..],..]}} (default: seeded contractions)");
  mv->add_option("--stat", vstat, "moment or cumulant")->check(CLI::IsMember({"moment", "cumulant"}));
  mv->add_option("--sigma", vk, "tolerance in standard errors")->check(CLI::PositiveNumber);
  mv->add_flag("--grid", vgrid, "run the full Monte Carlo grid at N = 4, 8");
  mv->callback([&] {
    action = [&] {
      if (vgrid) return emit_reports(out, G, {mc_grid({4, 8}, vsamples, 10, vseed, vk, 0.99, G.threads)});
      if (vwords.empty()) throw CLI::ValidationError("mc-verify", "give --word or --grid");
      Tuple P = parse_tuple(vwords);
      MatrixTuple A = vmat.empty() ? seeded_contractions(vn, det_indices(P), vseed) : load_matrices(vmat);
      SamplingOptions opt;
      opt.samples = vsamples;
      opt.seed = vseed;
      opt.threads = G.threads;
      SampleReport r = vstat == "moment" ? empirical_joint_moment(P, A, opt) : empirical_joint_cumulant(P, A, opt);
      json j{{"tuple", tuple_json(P)}, {"statistic", vstat},      {"N", A.N},
             {"samples", r.samples},   {"estimate", complex_json(r.estimate)}, {"stderr", r.std_error},
             {"target", complex_json(r.target)}, {"sigma_distance", r.sigma_distance}, {"within", r.within(vk)}};
      std::ostringstream os;
      os << vstat << " estimate " << r.estimate << " +- " << r.std_error << ", exact " << r.target << ", "
         << r.sigma_distance << " sigma: " << (r.within(vk) ? "ok" : "OUTSIDE");
      emit(out, G, j, os.str());
      if (!r.within(vk)) throw IdentityFailure("mc");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    if (action) action();
    return 0;
  } catch (const IdentityFailure&) {
    return 2;
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    for (auto* sc : app.get_subcommands()) err << sc->help();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace umap::cli
