#ifndef UMAP_EXPANSION_HPP
#define UMAP_EXPANSION_HPP

#include <gmpxx.h>

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "umap/maps.hpp"
#include "umap/ncpoly.hpp"
#include "umap/perm.hpp"

namespace umap {

using Tuple = std::vector<Word>;

// Data read off a tuple of monomials after rotating each to end in a unitary letter.
struct TupleData {
  std::vector<int> labels;  // 1..deg P
  std::vector<Word> M;
  SignVector eps;
  std::vector<int> colors;
  Permutation gamma;
  int m() const { return static_cast<int>(labels.size()) / 2; }
};
// Throws if some entry has degree 0. Without rotation every entry must end in a unitary letter.
TupleData tuple_data(const Tuple& P, bool rotate = true);
// every color class has as many u as u⁻¹
bool tuple_balanced(const Tuple& P);

// E[Tr P₁ ⋯ Tr P_l] under independent Haar unitaries at dimension N, in
// normalized-trace form (Tr = N tr folded into the coefficients).
TraceExpr moment_haar(const Tuple& P, int N);

// Set partitions of {0..n-1} as restricted growth strings.
std::vector<std::vector<int>> set_partitions(int n);

// Joint cumulant from a moment oracle on sub-tuples (index lists in increasing order).
template <class T>
T cumulant_from_moments(int l, const std::function<T(const std::vector<int>&)>& moment);

TraceExpr cumulant_haar(const Tuple& P, int N);

// M^(g)_{0,l}(P) in normalized-trace form, computed per π with walk counting.
TraceExpr genus_coefficient(int g, const Tuple& P);
// Same sum with every entry read from its own final unitary letter (no rotation, uncached).
TraceExpr genus_coefficient_at(int g, const Tuple& P);
// The same sum, evaluated by explicit map enumeration (test oracle).
TraceExpr genus_coefficient_by_enumeration(int g, const Tuple& P);
// Σ_{g ≤ G} N^{-2g} M^(g) as a numeric complex value
std::complex<double> truncated_genus_series(const Tuple& P, int G, int N, const MatrixMap& A);

// Exact normalized traces of deterministic words at small Gaussian-rational
// matrices; block-diagonal embeddings leave these values unchanged.
using ExactMatrix = std::vector<std::vector<CQ>>;
CQ evaluate_exact(const TraceExpr& T, const std::map<int, ExactMatrix>& A);

struct Potential {
  std::vector<Word> q;  // V = Σ z_i q_i
  int nu() const;       // max degree
};
struct FormalCumulant {
  int g = 0, l = 0, z_cap = 0;
  std::map<std::vector<int>, TraceExpr> coefficients;  // n ↦ coefficient of z^n
  std::string str() const;
};
FormalCumulant formal_cumulant(int g, const Tuple& P, const Potential& V, int z_cap);
std::vector<std::vector<int>> multi_indices(int k, int max_total);

struct IdentityCheck {
  TraceExpr lhs, rhs;
  bool equal() const { return lhs == rhs; }
};

// Tensor form with the u_color derivatives:
//   Σ_{I,g₁+g₂=g} M^(g₁)⊗M^(g₂)(P_I ⊗ P_{I^c} ♯ ∂P_l)
//     = −M^(g−1)(P₁ ⊗ ⋯ ⊗ ∂P_l) − Σ_j M^(g)(…P̌_j…, (DP_j)P_l)
IdentityCheck tutte_check(int g, const Tuple& P, int color);
// Recursion solved for M^(g)(P₁,…,P_l u) with P_l ending in u_color; lhs is M^(g)(P).
IdentityCheck tutte_recursion_check(int g, const Tuple& P);

// (−1)^{m+l} Σ_{ρ,σ ∈ S_m} (−1)^{c(ρ)+c(σ)} tr_ρ(B) tr_{σ⁻¹}(C) h_g(ρ⁻¹, γ̃, σ)
bool is_alternated(const Word& w);
TraceExpr hurwitz_reduction(int g, const Tuple& P);

// Rational lower bounds of the irrational constants, good to ~1e-12.
struct BoundConstants {
  mpq_class A, B, C, D;
};
BoundConstants bound_constants(int k, int nu);
mpz_class catalan(int n);
struct BoundReport {
  mpq_class lhs, rhs;
  bool holds() const { return lhs <= rhs; }
};
// |M^(g)(q_n, P)|/n! against A^{l(m+ν|n|)} B^{-l} C^{g(m+ν|n|)} D^{|n|} ∏c_{deg P_i} ∏c_{n_j}, m = deg P
BoundReport bounds_check(int g, const Tuple& P, const Potential& V, const std::vector<int>& n);
double radius_RV(int k, int nu);

// Master-operator machinery. A polynomial whose coefficients are trace expressions.
using TracePoly = std::map<Word, TraceExpr>;
// Π T̄_τ P with τ = M^(0)_{0,1}; P must have positive degree
TracePoly regularized_T(const Word& P);
// M^(0)_2(P₁ ⊗ Ξ P₂) against −M^(0)_1((DP₁)(DP₂)/deg P₂)
IdentityCheck master_operator_check(const Word& P1, const Word& P2);

// μ₂(∂D P) against deg⁺ μ₂(P⊗1) + deg⁻ μ₂(1⊗P) + μ₂(ΔP)
using Bilinear = std::function<TraceExpr(const Word&, const Word&)>;
IdentityCheck gradient_trick_check(const Word& P, int color, const Bilinear& mu2);

// ‖T̄_τ P‖_{ξ₂} ≤ 2‖τ‖_{ξ₁} ξ₁/(ξ₂−ξ₁) ‖P‖_{ξ₂} for a numeric linear form τ
struct NormBoundReport {
  double lhs = 0, rhs = 0;
  bool holds() const { return lhs <= rhs * (1 + 1e-12); }
};
NormBoundReport operator_norm_bound_check(const std::function<std::complex<double>(const Word&)>& tau,
                                          double tau_norm_xi1, double xi1, double xi2, const Poly& P);

// Generic tuples: every deterministic slot carries its own letter a_k.
// All sign patterns and colorings with up to `colors` colors, degrees in [min_deg, max_deg].
std::vector<Tuple> generic_tuples(int min_deg, int max_deg, int max_l, int colors);

// ----------------------------------------------------------------- template definitions

template <class T>
T cumulant_from_moments(int l, const std::function<T(const std::vector<int>&)>& moment) {
  std::map<unsigned, T> memo;
  std::function<T(unsigned)> cum = [&](unsigned mask) -> T {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    std::vector<int> idx;
    for (int k = 0; k < l; ++k)
      if (mask >> k & 1u) idx.push_back(k);
    T value = moment(idx);
    for (const auto& rgs : set_partitions(static_cast<int>(idx.size()))) {
      int nb = 0;
      for (int b : rgs) nb = std::max(nb, b + 1);
      if (nb < 2) continue;
      std::vector<unsigned> blocks(nb, 0u);
      for (size_t k = 0; k < idx.size(); ++k) blocks[rgs[k]] |= 1u << idx[k];
      T prod = cum(blocks[0]);
      for (int b = 1; b < nb; ++b) prod = prod * cum(blocks[b]);
      value = value - prod;
    }
    memo.emplace(mask, value);
    return value;
  };
  return cum(l == 0 ? 0u : (1u << l) - 1u);
}

}  // namespace umap

#endif
