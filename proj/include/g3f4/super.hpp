#pragma once

// Super-linear-algebra vocabulary: parities, super-dimensions, graded basis
// elements, sparse structure-constant tables, graded Lie superalgebra values
// with an exact Jacobi checker, and parity decomposition of linear maps.
//
// Global sign conventions (used by every module):
//   super-antisymmetry   [x,y] = -(-1)^{|x||y|} [y,x]
//   graded Jacobi        (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]]
//                          + (-1)^{|z||y|}[z,[x,y]] = 0
// The structure table stores (i,j) with i < j, plus the diagonal (i,i) for
// odd b_i only ([v,v] need not vanish for odd v); even diagonals are
// implicitly zero.

#include <g3f4/matrix.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace g3f4 {

enum Parity : int { Even = 0, Odd = 1 };

inline Parity parity_add(Parity a, Parity b) { return Parity((a + b) & 1); }
// (-1)^e as an exact scalar, e taken mod 2.
inline Scalar sign_pow(int e) { return (e & 1) ? Scalar(-1) : Scalar(1); }

struct SuperDim {
  long even = 0;
  long odd = 0;
  long total() const { return even + odd; }
  SuperDim& operator+=(const SuperDim& o) {
    even += o.even;
    odd += o.odd;
    return *this;
  }
  friend SuperDim operator+(SuperDim a, const SuperDim& b) { return a += b; }
  friend bool operator==(const SuperDim&, const SuperDim&) = default;
  std::string str() const { return "(" + std::to_string(even) + "|" + std::to_string(odd) + ")"; }
};

struct BasisElement {
  std::string label;
  Parity parity = Even;
  int degree = 0;
  // Root coefficients m_1..m_r for root-derived elements (doubles as the
  // lattice weight); empty when the element has no root datum.
  std::vector<int> multidegree;
};

// Sparse coefficient vector over a basis: (index, coefficient) pairs sorted
// by index, no explicit zeros.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

SparseVec sparse_normalize(SparseVec v);
SparseVec sparse_add(const SparseVec& a, const SparseVec& b);
SparseVec sparse_scale(const Scalar& c, const SparseVec& a);
SparseVec sparse_from_dense(const Vec& v);
Vec dense_from_sparse(const SparseVec& v, std::size_t n);

// Keyed by (i, j) with i < j, or i = j for odd b_i.
using StructureTable = std::map<std::pair<std::size_t, std::size_t>, SparseVec>;

struct JacobiFailure {
  std::size_t i, j, k;
  SparseVec residual;
};

class GradedLieSuperalgebra {
 public:
  // Validates index ranges, storage convention, absence of stored zeros, and
  // parity/degree additivity of every table entry; throws on violation.
  GradedLieSuperalgebra(std::vector<BasisElement> basis, StructureTable table,
                        std::map<std::string, std::string> metadata = {});

  std::size_t size() const { return basis_.size(); }
  const std::vector<BasisElement>& basis() const { return basis_; }
  const BasisElement& element(std::size_t i) const { return basis_[i]; }
  const StructureTable& table() const { return table_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  SuperDim super_dim() const;
  std::map<int, SuperDim> graded_dims() const;

  // [b_i, b_j] for any index order; the stored value is sign-adjusted for
  // i > j, and even diagonals return zero.
  SparseVec bracket_basis(std::size_t i, std::size_t j) const;
  // Bilinear extension to coefficient vectors over the basis.
  Vec bracket(const Vec& x, const Vec& y) const;
  SparseVec bracket_sparse(const SparseVec& x, const SparseVec& y) const;

  // Exact graded Jacobi check over all basis triples (repetitions included);
  // returns the first failing triple with its residual, or nullopt.
  std::optional<JacobiFailure> check_jacobi() const;

  // Indices sorted by (degree descending, parity even-first, label); this is
  // the canonical ordering of the JSON export.
  std::vector<std::size_t> canonical_order() const;

 private:
  std::vector<BasisElement> basis_;
  StructureTable table_;
  std::map<std::string, std::string> metadata_;
};

// Exact linear map between graded super spaces.  Basis convention: all even
// basis vectors first, then all odd ones; mat is sized
// (dst.even+dst.odd) x (src.even+src.odd).
struct GradedMap {
  SuperDim src, dst;
  QMatrix mat;

  GradedMap() = default;
  GradedMap(SuperDim s, SuperDim d) : src(s), dst(d), mat(d.total(), s.total()) {}
  // Parity of the block (row r, col c): dst parity of r plus src parity of c.
  Parity block_parity(std::size_t r, std::size_t c) const {
    Parity pr = r < std::size_t(dst.even) ? Even : Odd;
    Parity pc = c < std::size_t(src.even) ? Even : Odd;
    return parity_add(pr, pc);
  }
  // Pure parity of the map if all nonzero entries sit in blocks of one
  // parity; nullopt for mixed maps (and for the zero map, which is both).
  std::optional<Parity> pure_parity() const;
};

// A = A0 + A1 with A0 supported on the parity-preserving blocks and A1 on
// the parity-reversing blocks.
std::pair<GradedMap, GradedMap> parity_split(const GradedMap& a);

// JSON (de)serialization of GradedLieSuperalgebra in the canonical schema:
//   { "basis": [{label, parity, degree, multidegree}...],
//     "brackets": [[i, j, [[k, num, den], ...]], ...], "metadata": {...} }
// with basis sorted canonically and bracket indices referring to that order.
std::string to_json(const GradedLieSuperalgebra& alg);
GradedLieSuperalgebra algebra_from_json(const std::string& text);

}  // namespace g3f4
