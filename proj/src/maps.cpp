#include "umap/maps.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace umap {

namespace {

std::vector<int> sorted_colors(const std::vector<int>& colors) {
  std::vector<int> c = colors;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

Permutation extend_transposition(const std::vector<int>& I, const Transposition& t) {
  return Permutation::transposition(I, t.i, t.j);
}

SignVector restrict_signs(const SignVector& eps, const std::vector<int>& B) {
  std::vector<int> s;
  for (int x : B) s.push_back(eps(x));
  return SignVector(B, s);
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
  int count() {
    int c = 0;
    for (int k = 0; k < static_cast<int>(p.size()); ++k) c += find(k) == k;
    return c;
  }
};

int cycles_of(const std::vector<int>& img) {
  int c = 0;
  std::vector<char> seen(img.size(), 0);
  for (size_t k = 0; k < img.size(); ++k) {
    if (seen[k]) continue;
    ++c;
    for (size_t at = k; !seen[at]; at = static_cast<size_t>(img[at])) seen[at] = 1;
  }
  return c;
}

}  // namespace

int UnitaryTypeMap::color_of(int label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) throw std::out_of_range("label not in map");
  return colors[it - labels.begin()];
}

std::vector<int> UnitaryTypeMap::color_set() const { return sorted_colors(colors); }

std::vector<int> UnitaryTypeMap::labels_of_color(int c) const {
  std::vector<int> out;
  for (size_t k = 0; k < labels.size(); ++k)
    if (colors[k] == c) out.push_back(labels[k]);
  return out;
}

int UnitaryTypeMap::black_count() const {
  int r = 0;
  for (const auto& [c, w] : walks) r += w.length();
  return r;
}

bool UnitaryTypeMap::operator==(const UnitaryTypeMap& o) const {
  if (labels != o.labels || colors != o.colors || !(eps == o.eps)) return false;
  if (rho.domain() != o.rho.domain() || pi.domain() != o.pi.domain()) return false;
  if (!(rho == o.rho) || !(pi == o.pi)) return false;
  auto nonempty = [](const std::map<int, MonotoneWalk>& w) {
    std::map<int, MonotoneWalk> out;
    for (const auto& [c, x] : w)
      if (x.length()) out.emplace(c, x);
    return out;
  };
  return nonempty(walks) == nonempty(o.walks);
}

void validate_map(const UnitaryTypeMap& map) {
  const auto& I = map.labels;
  if (map.rho.domain() != I || map.pi.domain() != I || map.eps.domain() != I)
    throw std::invalid_argument("map: rho, pi, eps must share the label set");
  if (map.colors.size() != I.size()) throw std::invalid_argument("map: one color per label required");
  auto cs = map.color_set();
  for (const auto& [c, w] : map.walks)
    if (!std::binary_search(cs.begin(), cs.end(), c) && w.length() > 0)
      throw std::invalid_argument("map: walk given for an absent color");
  for (int c : cs) {
    auto J = map.labels_of_color(c);
    SignVector ec = restrict_signs(map.eps, J);
    for (int x : J)
      if (map.color_of(map.pi(x)) != c) throw std::invalid_argument("map: pi mixes colors");
    Permutation pc = restrict_to(map.pi, J);
    if (!is_sign_compatible(pc, ec)) throw std::invalid_argument("map: pi is not sign-compatible with eps");
    Permutation target = pi_eps(pc, ec);
    MonotoneWalk w;
    if (auto it = map.walks.find(c); it != map.walks.end()) w = it->second;
    auto plus = ec.plus_set();
    for (const auto& t : w.steps)
      if (!std::binary_search(plus.begin(), plus.end(), t.i) || !std::binary_search(plus.begin(), plus.end(), t.j))
        throw std::invalid_argument("map: walk step outside the +1 set of its color");
    if (!w.is_monotone()) throw std::invalid_argument("map: walk is not monotone");
    if (!(w.product(plus) == target)) throw std::invalid_argument("map: walk does not compose to pi^(eps)");
  }
}

UnitaryTypeMap build_map(Permutation rho, SignVector eps, std::vector<int> colors, Permutation pi,
                         std::map<int, MonotoneWalk> walks) {
  UnitaryTypeMap m;
  m.labels = rho.domain();
  m.rho = std::move(rho);
  m.eps = std::move(eps);
  m.colors = colors.empty() ? std::vector<int>(m.labels.size(), 1) : std::move(colors);
  m.pi = std::move(pi);
  for (auto& [c, w] : walks)
    if (w.length()) m.walks.emplace(c, std::move(w));
  validate_map(m);
  return m;
}

UnitaryTypeMap build_map(Permutation rho, SignVector eps, Permutation pi, MonotoneWalk walk) {
  std::map<int, MonotoneWalk> w;
  w.emplace(1, std::move(walk));
  return build_map(std::move(rho), std::move(eps), {}, std::move(pi), std::move(w));
}

// ---------------------------------------------------------------- embedded structure

int EmbeddedMap::index_of_white(int label) const {
  for (int k = 0; k < size(); ++k)
    if (half_edges[k].black == 0 && half_edges[k].label == label) return k;
  throw std::out_of_range("no white half-edge with that label");
}

std::vector<int> EmbeddedMap::face_permutation() const {
  std::vector<int> inv_sigma(size());
  for (int k = 0; k < size(); ++k) inv_sigma[sigma[k]] = k;
  std::vector<int> phi(size());
  for (int k = 0; k < size(); ++k) phi[k] = inv_sigma[alpha[k]];
  return phi;
}

namespace {

struct Layout {
  std::map<std::pair<int, int>, int> black_base;  // (color, number) -> index of slot 1
  int total = 0;
};

Layout layout_of(const UnitaryTypeMap& map) {
  Layout L;
  L.total = static_cast<int>(map.labels.size());
  for (int c : map.color_set()) {
    auto it = map.walks.find(c);
    int r = it == map.walks.end() ? 0 : it->second.length();
    for (int k = 1; k <= r; ++k) {
      L.black_base[{c, k}] = L.total;
      L.total += 4;
    }
  }
  return L;
}

// Builds α together with the construction's labels of outgoing black half-edges.
void construct_alpha(const UnitaryTypeMap& map, const Layout& L, std::vector<int>& alpha, std::vector<int>& lab) {
  alpha.assign(L.total, -1);
  lab.assign(L.total, 0);
  auto link = [&](int a, int b) {
    if (alpha[a] >= 0 || alpha[b] >= 0) throw std::logic_error("half-edge linked twice");
    alpha[a] = b;
    alpha[b] = a;
  };
  const auto& I = map.labels;
  for (int c : map.color_set()) {
    std::map<int, int> free_out;  // label -> free outgoing half-edge
    for (size_t k = 0; k < I.size(); ++k)
      if (map.colors[k] == c && map.eps.signs()[k] > 0) free_out[I[k]] = static_cast<int>(k);
    auto it = map.walks.find(c);
    if (it != map.walks.end()) {
      int num = 0;
      for (const auto& t : it->second.steps) {
        int base = L.black_base.at({c, ++num});
        link(free_out.at(t.i), base + 0);
        link(free_out.at(t.j), base + 2);
        lab[base + 1] = t.j;
        lab[base + 3] = t.i;
        free_out[t.j] = base + 1;
        free_out[t.i] = base + 3;
      }
    }
    Permutation pinv = map.pi.inverse();
    for (const auto& [label, h] : free_out) link(h, map.rho.index_of(pinv(label)));
  }
}

}  // namespace

EmbeddedMap build_embedded(const UnitaryTypeMap& map) {
  Layout L = layout_of(map);
  EmbeddedMap E;
  E.half_edges.resize(L.total);
  E.sigma.resize(L.total);
  E.outgoing.resize(L.total);
  const auto& I = map.labels;
  for (size_t k = 0; k < I.size(); ++k) {
    E.half_edges[k] = {I[k], map.colors[k], 0, 0};
    E.sigma[k] = map.rho.index_of(map.rho(I[k]));
    E.outgoing[k] = map.eps.signs()[k] > 0;
  }
  for (const auto& [key, base] : L.black_base)
    for (int s = 0; s < 4; ++s) {
      E.half_edges[base + s] = {0, key.first, key.second, s + 1};
      E.sigma[base + s] = base + (s + 1) % 4;
      E.outgoing[base + s] = s % 2;
    }
  std::vector<int> lab;
  construct_alpha(map, L, E.alpha, lab);
  return E;
}

std::vector<int> construction_labels(const UnitaryTypeMap& map) {
  Layout L = layout_of(map);
  std::vector<int> alpha, lab;
  construct_alpha(map, L, alpha, lab);
  return lab;
}

std::vector<int> propagate_labels(const EmbeddedMap& E) {
  const int H = E.size();
  std::vector<int> label(H, 0);
  for (int h = 0; h < H; ++h) {
    if (E.half_edges[h].black == 0) {
      label[h] = E.half_edges[h].label;
      continue;
    }
    // clockwise around the left face: φ̃⁻¹ = ασ
    int x = h;
    for (int steps = 0; E.half_edges[x].black != 0; ++steps) {
      if (steps > H) throw std::logic_error("face without a white vertex");
      x = E.alpha[E.sigma[x]];
    }
    if (E.outgoing[x] != E.outgoing[h]) throw std::logic_error("label orientation mismatch");
    label[h] = E.half_edges[x].label;
  }
  return label;
}

UnitaryTypeMap to_perm_data(const EmbeddedMap& E) {
  const int H = E.size();
  std::vector<int> labels, colors, signs, rho_img, pi_img;
  std::vector<int> white;
  for (int h = 0; h < H; ++h)
    if (E.half_edges[h].black == 0) white.push_back(h);
  std::sort(white.begin(), white.end(), [&](int a, int b) { return E.half_edges[a].label < E.half_edges[b].label; });
  auto lab = propagate_labels(E);
  for (int h : white) {
    labels.push_back(E.half_edges[h].label);
    colors.push_back(E.half_edges[h].color);
    signs.push_back(E.outgoing[h] ? 1 : -1);
    if (E.half_edges[E.sigma[h]].black != 0) throw std::invalid_argument("white vertex touches a black half-edge");
    rho_img.push_back(E.half_edges[E.sigma[h]].label);
    pi_img.push_back(lab[E.alpha[h]]);
  }
  std::map<std::pair<int, int>, std::vector<int>> outs;
  for (int h = 0; h < H; ++h)
    if (E.half_edges[h].black != 0 && E.outgoing[h])
      outs[{E.half_edges[h].color, E.half_edges[h].black}].push_back(lab[h]);
  std::map<int, MonotoneWalk> walks;
  for (const auto& [key, ls] : outs) {
    if (ls.size() != 2) throw std::invalid_argument("black vertex without two outgoing half-edges");
    auto& w = walks[key.first];
    if (static_cast<int>(w.steps.size()) != key.second - 1) throw std::invalid_argument("black vertices not numbered consecutively");
    w.steps.emplace_back(ls[0], ls[1]);
  }
  return build_map(Permutation::from_images(labels, rho_img), SignVector(labels, signs), colors,
                   Permutation::from_images(labels, pi_img), std::move(walks));
}

int embedded_components(const EmbeddedMap& E) {
  UnionFind uf(E.size());
  for (int h = 0; h < E.size(); ++h) {
    uf.unite(h, E.sigma[h]);
    uf.unite(h, E.alpha[h]);
  }
  return uf.count();
}

int embedded_euler_characteristic(const EmbeddedMap& E) {
  return cycles_of(E.sigma) - E.size() / 2 + cycles_of(E.face_permutation());
}

// ---------------------------------------------------------------- diagnostics

MapDiagnostics diagnostics(const UnitaryTypeMap& map) {
  MapDiagnostics d;
  d.phi = compose(map.rho.inverse(), map.pi.inverse());
  std::vector<Permutation> gens{map.rho, map.pi};
  int r = 0;
  d.nondecreasing = true;
  for (const auto& [c, w] : map.walks) {
    d.black_count[c] = w.length();
    r += w.length();
    d.nondecreasing = d.nondecreasing && w.is_monotone();
    for (const auto& t : w.steps) gens.push_back(extend_transposition(map.labels, t));
  }
  if (map.labels.empty()) {
    d.components = 0;
    d.connected = true;
    return d;
  }
  auto blocks = orbit_blocks(gens, map.labels);
  d.components = *std::max_element(blocks.begin(), blocks.end()) + 1;
  d.connected = d.components == 1;
  int twice = 2 * d.components - map.rho.num_cycles() - d.phi.num_cycles() + map.m() + r;
  if (twice % 2 != 0 || twice < 0) throw std::logic_error("Euler relation produced a non-integral genus");
  d.genus = twice / 2;
  return d;
}

// ---------------------------------------------------------------- enumeration

std::vector<Permutation> colored_sign_compatible(const SignVector& eps, const std::vector<int>& colors) {
  const auto& I = eps.domain();
  std::vector<int> cs = sorted_colors(colors);
  std::vector<std::vector<Permutation>> per;
  for (int c : cs) {
    std::vector<int> J;
    for (size_t k = 0; k < I.size(); ++k)
      if (colors[k] == c) J.push_back(I[k]);
    per.push_back(sign_compatible_permutations(restrict_signs(eps, J)));
    if (per.back().empty()) return {};
  }
  std::vector<Permutation> out;
  std::vector<size_t> idx(per.size(), 0);
  for (;;) {
    std::vector<int> img(I.size());
    for (size_t c = 0; c < per.size(); ++c) {
      const auto& p = per[c][idx[c]];
      for (int k = 0; k < p.size(); ++k)
        img[std::lower_bound(I.begin(), I.end(), p.domain()[k]) - I.begin()] = p.images()[k];
    }
    out.push_back(Permutation::from_images(I, std::move(img)));
    size_t c = 0;
    while (c < per.size() && ++idx[c] == per[c].size()) idx[c++] = 0;
    if (c == per.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts - 1, cur, out);
    cur.pop_back();
  }
}

void maps_with_r(const UnitaryTypeMap& skeleton, const std::vector<int>& cs, int r,
                 std::vector<UnitaryTypeMap>& out) {
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(r, static_cast<int>(cs.size()), cur, comps);
  std::vector<UnitaryTypeMap> local;
  for (const auto& comp : comps) {
    std::vector<std::vector<MonotoneWalk>> per;
    bool empty = false;
    for (size_t c = 0; c < cs.size(); ++c) {
      auto J = skeleton.labels_of_color(cs[c]);
      SignVector ec = restrict_signs(skeleton.eps, J);
      per.push_back(enumerate_monotone_walks(pi_eps(restrict_to(skeleton.pi, J), ec), comp[c]));
      if (per.back().empty()) { empty = true; break; }
    }
    if (empty) continue;
    std::vector<size_t> idx(per.size(), 0);
    for (;;) {
      UnitaryTypeMap m = skeleton;
      for (size_t c = 0; c < cs.size(); ++c)
        if (per[c][idx[c]].length()) m.walks[cs[c]] = per[c][idx[c]];
      local.push_back(std::move(m));
      size_t c = 0;
      while (c < per.size() && ++idx[c] == per[c].size()) idx[c++] = 0;
      if (c == per.size()) break;
    }
  }
  std::sort(local.begin(), local.end(), [](const UnitaryTypeMap& a, const UnitaryTypeMap& b) { return a.walks < b.walks; });
  for (auto& m : local) out.push_back(std::move(m));
}

}  // namespace

std::vector<UnitaryTypeMap> enumerate_maps(const std::vector<int>& I, const SignVector& eps,
                                           const Permutation& rho, const std::vector<int>& colors_in,
                                           const EnumerateOptions& opt) {
  if (opt.r.has_value() == opt.genus.has_value())
    throw std::invalid_argument("enumerate_maps: give exactly one of r or genus");
  if (rho.domain() != I || eps.domain() != I) throw std::invalid_argument("enumerate_maps: domain mismatch");
  std::vector<int> colors = colors_in.empty() ? std::vector<int>(I.size(), 1) : colors_in;
  auto pis = colored_sign_compatible(eps, colors);
  if (opt.max_work > 0 && static_cast<long>(pis.size()) > opt.max_work)
    throw std::runtime_error("enumerate_maps: |S^(eps)| = " + std::to_string(pis.size()) + " exceeds --max-work");
  auto cs = sorted_colors(colors);
  std::vector<UnitaryTypeMap> out;
  for (const auto& pi : pis) {
    UnitaryTypeMap sk;
    sk.labels = I;
    sk.rho = rho;
    sk.eps = eps;
    sk.colors = colors;
    sk.pi = pi;
    std::vector<UnitaryTypeMap> found;
    if (opt.r) {
      maps_with_r(sk, cs, *opt.r, found);
    } else {
      int cphi = compose(rho.inverse(), pi.inverse()).num_cycles();
      int cmax = opt.connected_only ? 1 : rho.num_cycles();
      for (int C = 1; C <= cmax; ++C) {
        int r = rho.num_cycles() + cphi - static_cast<int>(I.size()) / 2 - 2 * C + 2 * *opt.genus;
        if (r < 0) continue;
        std::vector<UnitaryTypeMap> cand;
        maps_with_r(sk, cs, r, cand);
        for (auto& m : cand) {
          auto d = diagnostics(m);
          if (d.components == C && d.genus == *opt.genus) found.push_back(std::move(m));
        }
      }
    }
    for (auto& m : found)
      if (!opt.connected_only || diagnostics(m).connected) out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------- relabeling and surgery

UnitaryTypeMap relabel_map(const UnitaryTypeMap& map, const std::vector<int>& from, const std::vector<int>& to) {
  auto f = [&](int x) {
    auto it = std::find(from.begin(), from.end(), x);
    if (it == from.end()) throw std::invalid_argument("relabel: label not mapped");
    return to[it - from.begin()];
  };
  std::vector<std::pair<int, std::pair<int, int>>> info;
  for (size_t k = 0; k < map.labels.size(); ++k)
    info.push_back({f(map.labels[k]), {map.eps.signs()[k], map.colors[k]}});
  std::sort(info.begin(), info.end());
  std::vector<int> labels, signs, colors;
  for (const auto& [x, sc] : info) {
    labels.push_back(x);
    signs.push_back(sc.first);
    colors.push_back(sc.second);
  }
  std::map<int, MonotoneWalk> walks;
  for (const auto& [c, w] : map.walks) {
    MonotoneWalk nw;
    for (const auto& t : w.steps) nw.steps.emplace_back(f(t.i), f(t.j));
    walks.emplace(c, nw);
  }
  return build_map(relabel(map.rho, from, to), SignVector(labels, signs), colors,
                   relabel(map.pi, from, to), std::move(walks));
}

std::vector<UnitaryTypeMap> split_components(const UnitaryTypeMap& map) {
  std::vector<UnitaryTypeMap> out;
  if (map.labels.empty()) return out;
  std::vector<Permutation> gens{map.rho, map.pi};
  for (const auto& [c, w] : map.walks)
    for (const auto& t : w.steps) gens.push_back(extend_transposition(map.labels, t));
  auto blocks = orbit_blocks(gens, map.labels);
  int nb = *std::max_element(blocks.begin(), blocks.end()) + 1;
  for (int b = 0; b < nb; ++b) {
    std::vector<int> O, signs, colors;
    for (size_t k = 0; k < map.labels.size(); ++k)
      if (blocks[k] == b) {
        O.push_back(map.labels[k]);
        signs.push_back(map.eps.signs()[k]);
        colors.push_back(map.colors[k]);
      }
    std::map<int, MonotoneWalk> walks;
    for (const auto& [c, w] : map.walks) {
      MonotoneWalk nw;
      for (const auto& t : w.steps)
        if (std::binary_search(O.begin(), O.end(), t.i)) nw.steps.push_back(t);
      if (nw.length()) walks.emplace(c, nw);
    }
    out.push_back(build_map(restrict_to(map.rho, O), SignVector(O, signs), colors,
                            restrict_to(map.pi, O), std::move(walks)));
  }
  return out;
}

namespace {

int distinguished(const UnitaryTypeMap& map) {
  if (map.labels.size() < 4) throw std::invalid_argument("surgery needs m >= 2");
  int d = map.labels.back();
  if (map.eps(d) != 1) throw std::invalid_argument("surgery: the maximal label must be outgoing (relabel first)");
  return d;
}

bool same_cycle(const Permutation& p, int a, int b) {
  for (int x = p(a);; x = p(x)) {
    if (x == b) return true;
    if (x == a) return false;
  }
}

}  // namespace

bool cut_white_applies(const UnitaryTypeMap& map) {
  int d = distinguished(map);
  auto it = map.walks.find(map.color_of(d));
  if (it == map.walks.end() || it->second.steps.empty()) return true;
  return it->second.steps.back().j != d;
}

SurgeryResult cut_white(const UnitaryTypeMap& map, std::optional<int> j_in) {
  int d = distinguished(map);
  if (!cut_white_applies(map)) throw std::invalid_argument("cut_white: the last step moves the maximal label");
  SurgeryResult res;
  int j = map.pi(d);
  if (j_in && *j_in != j) throw std::invalid_argument("cut_white: j must equal pi(2m)");
  res.j = j;
  auto diag = diagnostics(map);
  std::vector<int> Ij = label_difference(map.labels, std::vector<int>{std::min(j, d), std::max(j, d)});
  Permutation rho2 = trace_restrict(compose(map.rho, Permutation::transposition(map.labels, j, d)), Ij);
  std::vector<int> signs, colors;
  for (int x : Ij) {
    signs.push_back(map.eps(x));
    colors.push_back(map.color_of(x));
  }
  UnitaryTypeMap cut = build_map(rho2, SignVector(Ij, signs), colors, restrict_to(map.pi, Ij), map.walks);
  res.parts = split_components(cut);
  if (diag.phi(j) == j || diag.phi(d) == d) res.case_id = 1;
  else if (same_cycle(map.rho, j, d)) res.case_id = res.parts.size() == 1 ? 2 : 3;
  else res.case_id = 4;
  return res;
}

SurgeryResult cut_black(const UnitaryTypeMap& map) {
  int d = distinguished(map);
  if (cut_white_applies(map)) throw std::invalid_argument("cut_black: the last step does not move the maximal label");
  int c = map.color_of(d);
  auto walks = map.walks;
  Transposition t = walks.at(c).steps.back();
  walks.at(c).steps.pop_back();
  Permutation tau = extend_transposition(map.labels, t);
  SurgeryResult res;
  res.j = t.i;
  UnitaryTypeMap cut = build_map(compose(map.rho, tau), map.eps, map.colors, compose(tau, map.pi), std::move(walks));
  res.parts = split_components(cut);
  if (same_cycle(map.rho, t.i, d)) res.case_id = res.parts.size() == 2 ? 1 : 2;
  else res.case_id = 3;
  return res;
}

}  // namespace umap
