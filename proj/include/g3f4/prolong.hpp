#pragma once

// Tanaka-Weisfeiler prolongation of fundamental negatively graded Lie
// superalgebras.  Starting from m = g_{-mu} + ... + g_{-1} (generated by
// g_{-1}), each non-negative level g_k is realized as the space of maps
// A : g_{-1} -> g_{k-1} whose Leibniz-rule extension to all of m is
// consistent with every bracket relation of m.  For a pure-parity map the
// rule reads
//
//   A([u, v]) = [A(u), v] + (-1)^{|A||u|} [u, A(v)],
//
// and deeper values are produced through presentations v = (1/c)[w, v']
// with w in g_{-1}.  Levels are computed degree by degree until one
// vanishes -- the prolongation is finite-dimensional and is assembled into
// a GradedLieSuperalgebra -- or a prescribed threshold level is reached
// while still growing, in which case only that level's dimensions are
// recorded.
//
// An optional reduction prescribes level 0 as a subalgebra g_0 of the full
// derivation algebra der_0(m); levels k >= 1 are then computed inside the
// reduced tower.  Reduction maps are validated up front: they must be
// parity-homogeneous, linearly independent degree-0 super-derivations of m,
// closed under the super-commutator, and their span must contain the
// grading action (-identity on g_{-1}).
//
// Exactness and gates:
//   * every materialized level is re-verified against the full Leibniz rule,
//   * brackets between non-negative levels are obtained by exact
//     decomposition over the solved level basis (failure throws),
//   * an assembled finite prolongation is gated on check_jacobi.
//
// Linear systems are blocked by lattice weight (the multidegree carried by
// the symbol basis) and parity whenever every basis element and reduction
// map is weight-homogeneous; otherwise a single block per parity is used.
// All results are deterministic: block keys are iterated in sorted order
// and nullspace bases are canonical.

#include <g3f4/build.hpp>
#include <g3f4/matrix.hpp>
#include <g3f4/super.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace g3f4 {

enum class ProlongStatus { InProgress, Finite, ThresholdExceeded };

std::string status_name(ProlongStatus s);

// Reduction data: degree-0 maps written over the degree -1 block of the
// symbol basis (even columns first, then odd), spanning the chosen g_0.
struct ReductionSpec {
  std::vector<GradedMap> maps;
};

// Wraps the ad-action maps of the degree-0 block of a full algebra (see
// levi_action) as reduction data.
ReductionSpec reduction_from_levi(const std::vector<LeviMap>& maps);

// Leibniz extension of one numeric degree-0 map a : g_{-1} -> g_{-1} to
// every component g_{-t}, together with the list of bracket relations the
// extended map violates.  `a` is a super-derivation of m exactly when
// `violations` is empty; the check covers every pure-parity pair
// (u in g_{-1}, v in g_{-t}).  Mixed-parity maps are handled by splitting
// into parity components.
struct LeibnizExtension {
  std::vector<QMatrix> act;             // act[t-1] : g_{-t} -> g_{-t}
  std::vector<std::string> violations;  // empty iff a is a super-derivation
};

LeibnizExtension leibniz_extend(const GradedMap& a, const SymbolAlgebra& m);

// One non-negative level g_k.  Elements are pure-parity maps, grouped by
// lattice weight (sorted ascending, even before odd within a weight).  When
// only the dimensions of a level were needed (the final level of a run that
// exceeded its threshold), `materialized` is false and the per-element data
// is empty.
struct ProlongLevel {
  SuperDim dims;
  bool materialized = false;
  std::vector<Parity> parities;           // per element
  std::vector<std::vector<int>> weights;  // per element; empty when unweighted
  // act[e][t-1] : g_{-t} -> (degree k-t component).  Columns run over the
  // degree -t block of the symbol; rows run over the degree k-t symbol
  // block when k-t < 0 and over the level-(k-t) basis when k-t >= 0.
  std::vector<std::vector<QMatrix>> act;
};

// Brackets [g_i, g_j] c g_{i+j} between non-negative levels: for i < j every
// pair (a, b); for i == j pairs a < b plus odd diagonal pairs (a, a).  Values
// are sparse vectors over the level-(i+j) basis (possibly empty).
using LevelBrackets = std::map<std::pair<std::size_t, std::size_t>, SparseVec>;

struct ProlongationState {
  explicit ProlongationState(SymbolAlgebra m) : symbol(std::move(m)) {}

  SymbolAlgebra symbol;
  int mu = 0;            // depth of the symbol
  bool reduced = false;  // level 0 was prescribed by a ReductionSpec
  bool weighted = true;  // lattice-weight blocking in use
  // blocks[t-1]: indices of the degree -t symbol basis elements, in basis
  // order (the degree -1 block lists even elements first).
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<ProlongLevel> levels;  // levels[k] = g_k
  ProlongStatus status = ProlongStatus::InProgress;
  std::optional<GradedLieSuperalgebra> assembled;  // set by prolong on Finite
  std::map<std::pair<int, int>, LevelBrackets> brackets;  // memo, key i <= j

  std::map<int, SuperDim> level_dims() const;
};

// Validates the symbol (negative contiguous grading, fundamentality, degree
// -1 block ordered even-first) and, when a reduction is given, installs it
// as level 0 after checking shape, parity purity, linear independence, the
// super-derivation property, closure under the super-commutator, and
// membership of the grading action in the span.  Throws
// std::invalid_argument on any violation.
ProlongationState prolong_begin(
    const SymbolAlgebra& m,
    const std::optional<ReductionSpec>& reduction = std::nullopt);

// Computes level g_k; k must be the next uncomputed level.  The solved basis
// is re-verified against the full Leibniz rule.  An empty level signals that
// the prolongation terminates at k.
const ProlongLevel& prolong_step(ProlongationState& st, int k);

// Structure constants of [g_i, g_j] by exact decomposition of the induced
// action on g_{-1} over the level-(i+j) basis; memoized in the state.
// Requires the involved levels to be materialized; throws std::logic_error
// if a bracket fails to decompose (an inconsistent tower).
const LevelBrackets& nonneg_brackets(ProlongationState& st, int i, int j);

// Assembles the symbol and all materialized levels into one graded Lie
// superalgebra (basis: symbol elements, then levels ascending; level
// elements are labeled p<k>_<n>) and gates the result on check_jacobi.
GradedLieSuperalgebra assemble_prolongation(ProlongationState& st);

// Full driver.  Computes levels from k = 0 (unreduced) or k = 1 (reduced)
// upward.  Stops with status Finite at the first empty level, assembling
// the result into `assembled`; if level `threshold` is reached and is still
// nonzero, stops with status ThresholdExceeded, recording that level's
// dimensions only.  `threshold` defaults to depth+2 and must be at least
// depth+1.
ProlongationState prolong(
    const SymbolAlgebra& m,
    const std::optional<ReductionSpec>& reduction = std::nullopt,
    std::optional<int> threshold = std::nullopt);

}  // namespace g3f4
