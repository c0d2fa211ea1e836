#ifndef UMAP_MAPS_HPP
#define UMAP_MAPS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "umap/perm.hpp"
#include "umap/walks.hpp"

namespace umap {

// Permutational data of a (possibly multicolored) map of unitary type.
struct UnitaryTypeMap {
  std::vector<int> labels;
  Permutation rho;
  SignVector eps;
  std::vector<int> colors;            // color of each label, parallel to labels
  Permutation pi;
  std::map<int, MonotoneWalk> walks;  // one walk per color present

  int m() const { return static_cast<int>(labels.size()) / 2; }
  int color_of(int label) const;
  std::vector<int> color_set() const;
  std::vector<int> labels_of_color(int c) const;
  int black_count() const;
  bool operator==(const UnitaryTypeMap& o) const;
};

// Validates every compatibility invariant; throws std::invalid_argument.
UnitaryTypeMap build_map(Permutation rho, SignVector eps, std::vector<int> colors, Permutation pi,
                         std::map<int, MonotoneWalk> walks);
UnitaryTypeMap build_map(Permutation rho, SignVector eps, Permutation pi, MonotoneWalk walk);
void validate_map(const UnitaryTypeMap& map);

// Explicit half-edge structure; white half-edges come first in label order,
// then the four half-edges of every black vertex (per color, by number).
struct HalfEdge {
  int label = 0;  // white label, 0 for black half-edges
  int color = 0;
  int black = 0;  // black vertex number within its color, 0 for white
  int slot = 0;   // 1..4 around a black vertex
  bool operator==(const HalfEdge&) const = default;
};

struct EmbeddedMap {
  std::vector<HalfEdge> half_edges;
  std::vector<int> sigma;  // rotation around vertices
  std::vector<int> alpha;  // edge involution
  std::vector<int> outgoing;
  bool operator==(const EmbeddedMap&) const = default;

  int size() const { return static_cast<int>(half_edges.size()); }
  int index_of_white(int label) const;
  // φ̃ = σ⁻¹α (so that φ̃ασ = Id)
  std::vector<int> face_permutation() const;
};

EmbeddedMap build_embedded(const UnitaryTypeMap& map);
// labels assigned by the construction (outgoing black half-edges only; 0 elsewhere)
std::vector<int> construction_labels(const UnitaryTypeMap& map);
// Face walk: every half-edge gets the label of the first white half-edge met
// turning clockwise around its left face. Asserts orientation agreement.
std::vector<int> propagate_labels(const EmbeddedMap& E);
// Reads ρ, ε, colors, π and the walks back from the embedded structure.
UnitaryTypeMap to_perm_data(const EmbeddedMap& E);

struct MapDiagnostics {
  Permutation phi;
  int genus = 0;
  int components = 0;
  bool connected = false;
  bool nondecreasing = false;
  std::map<int, int> black_count;
};
MapDiagnostics diagnostics(const UnitaryTypeMap& map);
// Independent checks on the explicit structure.
int embedded_components(const EmbeddedMap& E);
int embedded_euler_characteristic(const EmbeddedMap& E);  // V − E + F

struct EnumerateOptions {
  std::optional<int> r;       // exact number of black vertices
  std::optional<int> genus;   // filter by genus instead
  bool connected_only = false;
  long max_work = 0;          // cap on |S^(ε)| iterated, 0 = unlimited
};
std::vector<UnitaryTypeMap> enumerate_maps(const std::vector<int>& I, const SignVector& eps,
                                           const Permutation& rho, const std::vector<int>& colors,
                                           const EnumerateOptions& opt);
// product over colors of sign-compatible permutations of each color class
std::vector<Permutation> colored_sign_compatible(const SignVector& eps, const std::vector<int>& colors);

// Conjugates all data by the label bijection from -> to; the result is revalidated.
UnitaryTypeMap relabel_map(const UnitaryTypeMap& map, const std::vector<int>& from, const std::vector<int>& to);
// connected components as separate maps, ordered by minimal label
std::vector<UnitaryTypeMap> split_components(const UnitaryTypeMap& map);

struct SurgeryResult {
  std::vector<UnitaryTypeMap> parts;
  int case_id = 0;  // white: 1..4, black: 1 (same cycle, split), 2 (same cycle, connected), 3 (different cycles)
  int j = 0;
};
// Both surgeries act at the maximal label, which must be outgoing.
bool cut_white_applies(const UnitaryTypeMap& map);
SurgeryResult cut_white(const UnitaryTypeMap& map, std::optional<int> j = std::nullopt);
SurgeryResult cut_black(const UnitaryTypeMap& map);

}  // namespace umap

#endif
