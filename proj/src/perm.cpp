#include "umap/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace umap {

namespace {

void check_sorted_unique(const std::vector<int>& d) {
  for (size_t k = 1; k < d.size(); ++k)
    if (d[k - 1] >= d[k]) throw std::invalid_argument("label set must be strictly increasing");
  if (!d.empty() && d.front() < 1) throw std::invalid_argument("labels must be positive");
}

std::vector<int> sorted_unique(std::vector<int> d) {
  std::sort(d.begin(), d.end());
  if (std::adjacent_find(d.begin(), d.end()) != d.end())
    throw std::invalid_argument("duplicate label");
  return d;
}

}  // namespace

std::vector<int> iota_labels(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

std::vector<int> label_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> label_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Permutation Permutation::identity(std::vector<int> domain) {
  domain = sorted_unique(std::move(domain));
  check_sorted_unique(domain);
  Permutation p;
  p.img_ = domain;
  p.dom_ = std::move(domain);
  return p;
}

Permutation Permutation::identity_n(int n) { return identity(iota_labels(n)); }

Permutation Permutation::from_images(std::vector<int> domain, std::vector<int> images) {
  if (domain.size() != images.size()) throw std::invalid_argument("domain/images size mismatch");
  check_sorted_unique(domain);
  std::vector<int> sorted = images;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != domain) throw std::invalid_argument("images are not a bijection of the domain");
  Permutation p;
  p.dom_ = std::move(domain);
  p.img_ = std::move(images);
  return p;
}

Permutation Permutation::from_cycles(std::vector<int> domain,
                                     const std::vector<std::vector<int>>& cycles) {
  Permutation p = identity(std::move(domain));
  std::vector<char> seen(p.dom_.size(), 0);
  for (const auto& c : cycles) {
    for (size_t k = 0; k < c.size(); ++k) {
      int at = p.index_of(c[k]);
      if (at < 0) throw std::invalid_argument("cycle label " + std::to_string(c[k]) + " outside domain");
      if (seen[at]) throw std::invalid_argument("label " + std::to_string(c[k]) + " repeated in cycles");
      seen[at] = 1;
      p.img_[at] = c[(k + 1) % c.size()];
    }
  }
  return p;
}

Permutation Permutation::transposition(std::vector<int> domain, int i, int j) {
  if (i == j) throw std::invalid_argument("transposition needs distinct labels");
  return from_cycles(std::move(domain), {{i, j}});
}

namespace {

std::vector<std::vector<int>> parse_cycles(std::string_view text) {
  std::vector<std::vector<int>> cycles;
  size_t k = 0;
  auto skip = [&] {
    while (k < text.size() && (text[k] == ' ' || text[k] == '\t' || text[k] == ',')) ++k;
  };
  skip();
  if (text.substr(k) == "Id" || text.substr(k) == "id") return cycles;
  while (k < text.size()) {
    if (text[k] != '(')
      throw std::invalid_argument("cycle notation: expected '(' at position " + std::to_string(k));
    ++k;
    std::vector<int> cyc;
    for (;;) {
      skip();
      if (k >= text.size()) throw std::invalid_argument("cycle notation: unterminated cycle");
      if (text[k] == ')') { ++k; break; }
      size_t start = k;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (start == k)
        throw std::invalid_argument("cycle notation: expected label at position " + std::to_string(start));
      cyc.push_back(std::stoi(std::string(text.substr(start, k - start))));
    }
    if (!cyc.empty()) cycles.push_back(std::move(cyc));
    skip();
  }
  return cycles;
}

}  // namespace

Permutation Permutation::parse(std::string_view text, std::vector<int> domain) {
  return from_cycles(std::move(domain), parse_cycles(text));
}

Permutation Permutation::parse_n(std::string_view text, int n) {
  auto cycles = parse_cycles(text);
  if (n == 0)
    for (const auto& c : cycles)
      for (int x : c) n = std::max(n, x);
  return from_cycles(iota_labels(n), cycles);
}

bool Permutation::contains(int x) const { return index_of(x) >= 0; }

int Permutation::index_of(int x) const {
  auto it = std::lower_bound(dom_.begin(), dom_.end(), x);
  if (it == dom_.end() || *it != x) return -1;
  return static_cast<int>(it - dom_.begin());
}

int Permutation::operator()(int x) const {
  int at = index_of(x);
  if (at < 0) throw std::out_of_range("label " + std::to_string(x) + " not in domain");
  return img_[at];
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(dom_.size(), 0);
  for (size_t k = 0; k < dom_.size(); ++k) {
    if (seen[k]) continue;
    std::vector<int> cyc;
    size_t at = k;
    while (!seen[at]) {
      seen[at] = 1;
      cyc.push_back(dom_[at]);
      at = static_cast<size_t>(index_of(img_[at]));
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

int Permutation::num_cycles() const {
  int c = 0;
  std::vector<char> seen(dom_.size(), 0);
  for (size_t k = 0; k < dom_.size(); ++k) {
    if (seen[k]) continue;
    ++c;
    for (size_t at = k; !seen[at]; at = static_cast<size_t>(index_of(img_[at]))) seen[at] = 1;
  }
  return c;
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<int> t;
  for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
  std::sort(t.rbegin(), t.rend());
  return t;
}

bool Permutation::is_identity() const { return dom_ == img_; }

Permutation Permutation::inverse() const {
  Permutation p;
  p.dom_ = dom_;
  p.img_.resize(dom_.size());
  for (size_t k = 0; k < dom_.size(); ++k) p.img_[index_of(img_[k])] = dom_[k];
  return p;
}

std::string Permutation::str() const {
  std::ostringstream os;
  for (const auto& c : cycles()) {
    if (c.size() == 1) continue;
    os << '(';
    for (size_t k = 0; k < c.size(); ++k) os << (k ? " " : "") << c[k];
    os << ')';
  }
  std::string s = os.str();
  return s.empty() ? "()" : s;
}

bool Permutation::operator==(const Permutation& o) const {
  if (dom_ != o.dom_) throw std::invalid_argument("comparing permutations on different domains");
  return img_ == o.img_;
}

std::strong_ordering Permutation::operator<=>(const Permutation& o) const {
  if (auto c = dom_ <=> o.dom_; c != 0) return c;
  return img_ <=> o.img_;
}

void require_same_domain(const Permutation& a, const Permutation& b) {
  if (a.domain() != b.domain()) throw std::invalid_argument("permutation domain mismatch");
}

Permutation compose(const Permutation& a, const Permutation& b) {
  require_same_domain(a, b);
  std::vector<int> img(b.size());
  for (int k = 0; k < b.size(); ++k) img[k] = a(b.images()[k]);
  return Permutation::from_images(b.domain(), std::move(img));
}

Permutation operator*(const Permutation& a, const Permutation& b) { return compose(a, b); }

Permutation conjugate(const Permutation& s, const Permutation& g) {
  return compose(g.inverse(), compose(s, g));
}

Permutation trace_restrict(const Permutation& s, const std::vector<int>& B) {
  std::vector<int> dom = sorted_unique(B);
  if (dom.empty()) throw std::invalid_argument("trace_restrict: empty subset");
  for (int x : dom)
    if (!s.contains(x)) throw std::invalid_argument("trace_restrict: subset not inside domain");
  std::vector<int> img(dom.size());
  for (size_t k = 0; k < dom.size(); ++k) {
    int y = s(dom[k]);
    while (!std::binary_search(dom.begin(), dom.end(), y)) y = s(y);
    img[k] = y;
  }
  return Permutation::from_images(std::move(dom), std::move(img));
}

Permutation restrict_to(const Permutation& s, const std::vector<int>& B) {
  std::vector<int> dom = sorted_unique(B);
  std::vector<int> img(dom.size());
  for (size_t k = 0; k < dom.size(); ++k) img[k] = s(dom[k]);
  return Permutation::from_images(std::move(dom), std::move(img));
}

Permutation relabel(const Permutation& s, const std::vector<int>& from, const std::vector<int>& to) {
  if (from.size() != to.size()) throw std::invalid_argument("relabel: size mismatch");
  auto f = [&](int x) {
    auto it = std::find(from.begin(), from.end(), x);
    if (it == from.end()) throw std::invalid_argument("relabel: label not mapped");
    return to[it - from.begin()];
  };
  std::vector<std::pair<int, int>> pairs;
  for (int x : s.domain()) pairs.emplace_back(f(x), f(s(x)));
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> dom, img;
  for (auto [x, y] : pairs) {
    dom.push_back(x);
    img.push_back(y);
  }
  return Permutation::from_images(std::move(dom), std::move(img));
}

Transposition::Transposition(int a, int b) : i(std::min(a, b)), j(std::max(a, b)) {
  if (a == b) throw std::invalid_argument("transposition needs distinct labels");
}

SignVector::SignVector(std::vector<int> domain, std::vector<int> signs)
    : dom_(std::move(domain)), sgn_(std::move(signs)) {
  check_sorted_unique(dom_);
  if (dom_.size() != sgn_.size()) throw std::invalid_argument("sign vector size mismatch");
  for (int s : sgn_)
    if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
}

SignVector SignVector::from_signs(std::vector<int> signs) {
  int n = static_cast<int>(signs.size());
  return SignVector(iota_labels(n), std::move(signs));
}

SignVector SignVector::parse(std::string_view pm) {
  std::vector<int> s;
  for (char c : pm) {
    if (c == '+') s.push_back(1);
    else if (c == '-') s.push_back(-1);
    else if (c != ' ' && c != ',') throw std::invalid_argument("sign string: expected '+' or '-'");
  }
  return from_signs(std::move(s));
}

int SignVector::operator()(int x) const {
  auto it = std::lower_bound(dom_.begin(), dom_.end(), x);
  if (it == dom_.end() || *it != x) throw std::out_of_range("label not in sign domain");
  return sgn_[it - dom_.begin()];
}

std::vector<int> SignVector::plus_set() const {
  std::vector<int> out;
  for (size_t k = 0; k < dom_.size(); ++k)
    if (sgn_[k] > 0) out.push_back(dom_[k]);
  return out;
}

std::vector<int> SignVector::minus_set() const {
  std::vector<int> out;
  for (size_t k = 0; k < dom_.size(); ++k)
    if (sgn_[k] < 0) out.push_back(dom_[k]);
  return out;
}

bool SignVector::balanced() const { return plus_set().size() == minus_set().size(); }

std::string SignVector::str() const {
  std::string s;
  for (int x : sgn_) s += x > 0 ? '+' : '-';
  return s;
}

bool is_sign_compatible(const Permutation& pi, const SignVector& eps) {
  if (pi.domain() != eps.domain()) throw std::invalid_argument("permutation/sign domain mismatch");
  if (!eps.balanced()) return false;
  for (int x : eps.plus_set())
    if (eps(pi(x)) != -1) return false;
  return true;
}

Permutation pi_eps(const Permutation& pi, const SignVector& eps) {
  if (!is_sign_compatible(pi, eps)) throw std::invalid_argument("pi_eps: permutation not sign-compatible");
  std::vector<int> plus = eps.plus_set();
  std::vector<int> img;
  for (int x : plus) img.push_back(pi(pi(x)));
  return Permutation::from_images(std::move(plus), std::move(img));
}

std::vector<Permutation> sign_compatible_permutations(const SignVector& eps) {
  std::vector<Permutation> out;
  if (!eps.balanced()) return out;
  std::vector<int> plus = eps.plus_set(), minus = eps.minus_set();
  std::vector<int> a = minus, b = plus;  // images of plus, images of minus
  const auto& dom = eps.domain();
  do {
    do {
      std::vector<int> img(dom.size());
      for (size_t k = 0; k < plus.size(); ++k) {
        img[std::lower_bound(dom.begin(), dom.end(), plus[k]) - dom.begin()] = a[k];
        img[std::lower_bound(dom.begin(), dom.end(), minus[k]) - dom.begin()] = b[k];
      }
      out.push_back(Permutation::from_images(dom, std::move(img)));
    } while (std::next_permutation(b.begin(), b.end()));
  } while (std::next_permutation(a.begin(), a.end()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace umap
