#pragma once
// Root systems of the two exceptional Lie superalgebras handled by this
// project: simple systems for every Dynkin diagram, enumeration of all roots
// with parities, parabolic grading weights, Killing pairings, and the
// odd-reflection identification of parabolic cases.
//
// Ambient coordinates are (delta, eps1, eps2, eps3), exact rationals.
// For G3 the relation eps1 + eps2 + eps3 = 0 holds; weights are canonicalized
// at construction by eliminating eps3, so equality is plain coefficient
// comparison.

#include <g3f4/rational.hpp>
#include <g3f4/super.hpp>

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace g3f4 {

enum class Algebra { G3, F4 };

std::string algebra_name(Algebra a);            // "g3" | "f4"
Algebra algebra_from_name(const std::string&);  // throws on unknown name
int rank(Algebra a);                            // 3 | 4
int num_diagrams(Algebra a);                    // 4 | 6

// ---------------------------------------------------------------------------
// Ambient weights

struct AmbientWeight {
  Algebra alg;
  std::array<Scalar, 4> c;  // coefficients of (delta, eps1, eps2, eps3)

  AmbientWeight(Algebra a, std::array<Scalar, 4> coeffs);

  bool is_zero() const;
  std::string str() const;  // e.g. "d-e1-e2", "(d-e1-e2-e3)/2", "0"

  AmbientWeight operator+(const AmbientWeight& o) const;
  AmbientWeight operator-(const AmbientWeight& o) const;
  AmbientWeight operator-() const;
  AmbientWeight operator*(const Scalar& s) const;
  bool operator==(const AmbientWeight& o) const;
  bool operator!=(const AmbientWeight& o) const { return !(*this == o); }
  bool operator<(const AmbientWeight& o) const;  // for use as map/set key
};

// Invariant bilinear pairing on ambient weights; throws on mixed algebras.
// G3: <eps_i,eps_j> = 1 - 3*delta_ij, <delta,delta> = 2, <delta,eps_i> = 0.
// F4: <eps_i,eps_j> = delta_ij, <delta,delta> = -3, <delta,eps_i> = 0.
Scalar killing_pairing(const AmbientWeight& a, const AmbientWeight& b);

// Root-set membership in the ambient description (independent of diagram).
bool is_even_root(Algebra a, const AmbientWeight& w);
bool is_odd_root(Algebra a, const AmbientWeight& w);
bool is_root(Algebra a, const AmbientWeight& w);
// Parity of a root; throws std::invalid_argument if w is not a root.
Parity root_parity(Algebra a, const AmbientWeight& w);

// ---------------------------------------------------------------------------
// Dynkin diagrams and simple systems

struct DiagramId {
  Algebra alg;
  int xi;  // 1-based: 1..4 for G3 ("I".."IV"), 1..6 for F4 ("I".."VI")

  bool operator==(const DiagramId& o) const {
    return alg == o.alg && xi == o.xi;
  }
  bool operator!=(const DiagramId& o) const { return !(*this == o); }
  bool operator<(const DiagramId& o) const {
    if (alg != o.alg) return alg < o.alg;
    return xi < o.xi;
  }
};

std::string diagram_name(const DiagramId& d);               // "I".."VI"
DiagramId diagram_from_name(Algebra a, const std::string&); // throws on bad name
std::vector<DiagramId> all_diagrams(Algebra a);

// The simple roots (alpha_1..alpha_r) of the given diagram, in table order.
std::vector<AmbientWeight> simple_system(const DiagramId& d);

// ---------------------------------------------------------------------------
// Roots expanded over a diagram's simple system

struct RootVector {
  DiagramId diagram;
  std::vector<int> m;  // coefficients over alpha_1..alpha_r, uniform sign
  Parity parity;
  AmbientWeight ambient;

  int height() const;  // sum of m (negative for negative roots)
  bool is_positive() const;
  std::string m_str() const;  // "(m1,m2,...,mr)"
};

// All roots of the algebra, expanded over the diagram's simple system.
// Order: negatives first (height ascending, i.e. lowest root first, then
// lexicographic on m), then positives (mirror: height descending reversed —
// i.e. height ascending, lex). Exactly closed under negation.
std::vector<RootVector> enumerate_roots(const DiagramId& d);

// Just the negative roots, sorted by (|height| ascending, m lexicographic
// ascending on |m|): the canonical basis order used for symbol algebras.
std::vector<RootVector> negative_roots(const DiagramId& d);

// ---------------------------------------------------------------------------
// Parabolic cases

using Crossing = std::set<int>;  // 1-based node indices, nonempty

struct ParabolicId {
  DiagramId diagram;
  Crossing crossing;

  bool operator==(const ParabolicId& o) const {
    return diagram == o.diagram && crossing == o.crossing;
  }
  bool operator!=(const ParabolicId& o) const { return !(*this == o); }
  bool operator<(const ParabolicId& o) const {
    if (diagram != o.diagram) return diagram < o.diagram;
    return crossing < o.crossing;
  }
};

// "I_13" (diagram name, underscore, concatenated node digits).
std::string case_name(const ParabolicId& p);
// Full name "g3:I_13".
std::string full_case_name(const ParabolicId& p);
// Parses "I_13" for a given algebra; throws on malformed input.
ParabolicId case_from_name(Algebra a, const std::string& name);

// Sum of the crossed coefficients of r: the parabolic grading weight.
int grading_weight(const RootVector& r, const ParabolicId& p);
int grading_weight(const std::vector<int>& m, const Crossing& chi);

// Maximal |grading_weight| over negative roots.
int depth(const ParabolicId& p);

// Per-level dimensions of the negative part: level -k -> (even|odd) count of
// negative roots with grading weight -k. Keys -1..-depth. Derived from root
// data only (no structure constants).
std::map<int, SuperDim> negative_level_dims(const ParabolicId& p);

// All 2^r - 1 crossings for every diagram: 28 for G3, 90 for F4.
std::vector<ParabolicId> all_parabolics(Algebra a);
// The canonical representatives, in appendix order: 19 for G3, 55 for F4.
std::vector<ParabolicId> canonical_parabolics(Algebra a);

// ---------------------------------------------------------------------------
// Odd reflections and case identification

struct OddReflection {
  DiagramId from;
  int node;  // 1-based index of the isotropic simple root reflected at
  DiagramId to;
  std::vector<int> node_map;  // node_map[j-1] = image node of j under the
                              // induced bijection of simple roots
};

// Every odd reflection available on the algebra's diagrams (one per isotropic
// simple root per diagram), with image diagram and node bijection derived
// from the root data. Throws if an image system matches no table diagram.
std::vector<OddReflection> odd_reflections(Algebra a);

struct EquivalenceClasses {
  // Partition of all_parabolics(a); classes ordered by their representative's
  // position in canonical_parabolics(a). Members sorted by ParabolicId order.
  std::vector<std::vector<ParabolicId>> classes;
  // representatives[i] is the unique canonical member of classes[i].
  std::vector<ParabolicId> representatives;

  int class_index(const ParabolicId& p) const;  // -1 if unknown
};

// Identification of parabolic cases under odd reflections: reflecting at
// node i maps (d, chi) to (d', node_map(chi)) whenever i is not in chi.
// Verified internally: class count (19 | 55), exactly one canonical
// representative per class, identical per-level dimensions within a class.
const EquivalenceClasses& equivalence_chains(Algebra a);

ParabolicId canonical_representative(const ParabolicId& p);

// The five case-classes whose unreduced prolongation is infinite:
// g3 I_1, g3 III_1, f4 I_1, f4 I_4, f4 III_3 (by canonical representative).
bool is_dark(const ParabolicId& p);

// ---------------------------------------------------------------------------
// Text rendering (CLI)

// Plain-text table of the diagram's negative roots grouped by parity
// (coefficient vectors in canonical order).
std::string render_root_table(const DiagramId& d);

}  // namespace g3f4
