#pragma once

// Structure-constant construction for the two exceptional Lie superalgebras:
// (a) the nilpotent symbol algebras m = (sum of negative-weight root spaces
//     of a parabolic grading), and
// (b) the full algebra: Cartan subalgebra, all root vectors, mixed brackets.
//
// Normalization scheme (deterministic):
//   * Per sign half (all-negative / all-positive roots), each non-simple root
//     gets one pinned decomposition pair — the lexicographically smallest
//     pair in basis order — whose constant is fixed to 1.  The pins form a
//     spanning forest of the root-sum graph and set the root-vector scales.
//   * Every other decomposition constant is derived by height recursion:
//     applying a lowering operator f_i with [e_g, f_i] != 0 to the relation
//     [e_a, e_b] = N e_g turns N into a ratio of brackets of strictly
//     smaller total height (and mirrored with a raising operator for the
//     negative half).  Each derived root-sum constant must be nonzero and
//     both halves must pass a brute-force graded Jacobi check (enforced).
//   * In the full algebra the positive root vectors are rescaled afterwards
//     so that [e_a, e_{-a}] is exactly the coroot of a: the Killing dual of
//     2a/<a,a> when <a,a> != 0, of a itself when a is isotropic.  Negative
//     pins stay at 1; they are shared with the symbol algebras.

#include <g3f4/matrix.hpp>
#include <g3f4/roots.hpp>
#include <g3f4/super.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace g3f4 {

// Stable label of a root basis vector from its coefficient vector,
// e.g. "e(-1,-2,-1)".
std::string root_label(const std::vector<int>& m);

// Structure constants of one sign half of the root system: for basis roots
// i <= j whose sum is again a root of the half, [e_i, e_j] = c * e_{i+j}.
// Diagonal entries occur only for odd roots whose double is a root.
struct HalfTable {
  DiagramId diagram;
  std::vector<RootVector> roots;                  // height asc, |m| lex asc
  std::map<std::vector<int>, std::size_t> index;  // m-vector -> position
  std::map<std::pair<std::size_t, std::size_t>, Scalar> constants;  // i <= j
  // For each non-simple root: the pinned pair defining its scale (c = 1).
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> pins;

  // [e_i, e_j] for any index order (the flip sign is applied for i > j, and
  // even diagonals are zero): returns (constant, target index), or nullopt
  // when the root sum is not a root of the half.
  std::optional<std::pair<Scalar, std::size_t>> bracket(std::size_t i,
                                                        std::size_t j) const;
};

// Memoized per diagram; safe for concurrent use.
const HalfTable& borel_negative(const DiagramId& d);
const HalfTable& borel_positive(const DiagramId& d);

// ---------------------------------------------------------------------------
// Symbol algebras

struct SymbolAlgebra {
  ParabolicId parabolic;
  std::vector<RootVector> roots;  // aligned with alg.basis()
  GradedLieSuperalgebra alg;
};

// Negative-weight root spaces of the parabolic grading, with degree = grading
// weight and multidegree = root coefficient vector.  Basis order is the
// canonical export order: degree descending (-1 block first), even before
// odd, then label.
SymbolAlgebra build_symbol(const ParabolicId& p);

// The same structure table under a different crossing on the same diagram:
// degrees are recomputed from the multidegrees, elements of non-negative
// weight are dropped, and the basis is re-sorted canonically.  Throws
// std::invalid_argument if s lacks roots the new crossing needs (only
// crossings chi' with all their negative-weight roots present — in
// particular any chi' contained in s's crossing — can be reached).
SymbolAlgebra regrade(const SymbolAlgebra& s, const Crossing& chi2);

// ---------------------------------------------------------------------------
// Full algebras

struct FullAlgebra {
  DiagramId diagram;
  std::vector<RootVector> neg_roots, pos_roots;  // mirrored index alignment
  GradedLieSuperalgebra alg;  // basis: negatives, h_1..h_r, positives
  std::size_t rank_ = 0;
  std::map<std::vector<int>, std::size_t> root_idx_;  // both signs

  std::size_t n_roots() const { return neg_roots.size(); }
  std::size_t neg_index(std::size_t i) const { return i; }
  std::size_t cartan_index(std::size_t j) const { return n_roots() + j; }
  std::size_t pos_index(std::size_t i) const {
    return n_roots() + rank_ + i;
  }
  // Basis index of the root vector with signed coefficient vector m.
  std::size_t root_index(const std::vector<int>& m) const;
};

// Chevalley-style realization from the root data; degree field carries the
// principal (height) grading.  Gated on an exact Jacobi check at build time.
// Memoized per diagram; safe for concurrent use.
const FullAlgebra& build_full(const DiagramId& d);

// Basis indices per parabolic grading weight (Cartan at 0).  Verifies the
// mirror symmetry dim g_k = dim g_{-k} and that the weight range is exactly
// [-depth, depth].
std::map<int, std::vector<std::size_t>> graded_parts(const FullAlgebra& f,
                                                     const ParabolicId& p);

// ad-action of one degree-0 basis element on g_{-1}.  The matrix is written
// over the degree -1 block of build_symbol(p) in its basis order (even
// columns first, then odd), so it can be consumed directly as reduction data.
struct LeviMap {
  std::string label;
  Parity parity = Even;
  GradedMap map;
};

// One LeviMap per degree-0 basis element of the full algebra, in basis order.
std::vector<LeviMap> levi_action(const FullAlgebra& f, const ParabolicId& p);

// ---------------------------------------------------------------------------
// Consistency between the two construction routes

struct CrossCheckReport {
  bool pass = true;
  std::string detail;  // first failing comparison when pass is false
};

// Compares per-degree dimensions and, for every negative degree pair (i, j),
// the rank of the bracket map g_i (x) g_j -> g_{i+j} between the full algebra
// (restricted to the parabolic grading) and the symbol algebra.
CrossCheckReport cross_check_symbol(const FullAlgebra& f,
                                    const SymbolAlgebra& s,
                                    const ParabolicId& p);

}  // namespace g3f4
