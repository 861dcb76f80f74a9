#pragma once

// Polynomial super vector fields on C^{m|n}: exact arithmetic in commuting
// coordinates x_i and anticommuting coordinates xi_j, derivations and their
// super Lie brackets, the odd contact machinery on C^{1|7} (contact fields
// X_f, the Lagrange bracket on generating functions, the G_2-cubic
// annihilator inside der_0 of the contact Heisenberg algebra), and closure
// verification for explicit field lists, used for the coordinate
// realizations of the exceptional Lie superalgebras G(3) and F(4).
//
// Conventions:
//   * xi_a xi_b = -xi_b xi_a and xi_a^2 = 0; monomials are stored with the
//     odd factors sorted ascending and the Koszul sign absorbed into the
//     coefficient, so equality is exact term-by-term comparison.
//   * the odd partial derivative is the left derivative:
//     d_{xi}(f g) = d_{xi}(f) g + (-1)^{|f|} f d_{xi}(g).
//   * a field X = sum a_i d_{x_i} + sum b_j d_{xi_j} acts on polynomials as
//     a derivation with the coefficients multiplying from the left; the
//     parity of a term is the coefficient parity plus the coordinate parity.
//   * [X, Y] = X Y - (-1)^{|X||Y|} Y X, computed on coordinate functions;
//     mixed-parity inputs are handled by bilinearity over parity parts.

#include <g3f4/build.hpp>
#include <g3f4/prolong.hpp>
#include <g3f4/super.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace g3f4 {

// ---------------------------------------------------------------------------
// Coordinate systems and super polynomials

struct CoordSystem {
  std::vector<std::string> even_names;
  std::vector<std::string> odd_names;
  friend bool operator==(const CoordSystem&, const CoordSystem&) = default;
};
using CoordSystemPtr = std::shared_ptr<const CoordSystem>;

// The odd contact model C^{1|7}: (u | xi1..xi7).
CoordSystemPtr contact_coords();
// The flat model C^{6|4}: (x1..x6 | xi1..xi4).
CoordSystemPtr realization_coords();

// One monomial: exponent per even coordinate, strictly increasing list of
// odd coordinate indices.
struct Monomial {
  std::vector<unsigned> even;
  std::vector<std::size_t> odd;
  Parity parity() const { return Parity(odd.size() & 1); }
  // Total polynomial degree (every coordinate counts 1).
  std::size_t total_degree() const;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

class SuperPolynomial {
 public:
  // The zero polynomial of the given system.
  explicit SuperPolynomial(CoordSystemPtr sys);
  static SuperPolynomial constant(CoordSystemPtr sys, const Scalar& c);
  static SuperPolynomial even_coord(CoordSystemPtr sys, std::size_t i);
  static SuperPolynomial odd_coord(CoordSystemPtr sys, std::size_t j);

  const CoordSystemPtr& system() const { return sys_; }
  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  SuperPolynomial& operator+=(const SuperPolynomial& o);
  friend SuperPolynomial operator+(SuperPolynomial a, const SuperPolynomial& b) { return a += b; }
  friend SuperPolynomial operator-(const SuperPolynomial& a, const SuperPolynomial& b);
  SuperPolynomial operator-() const;
  friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b);
  SuperPolynomial operator*(const Scalar& c) const;
  friend bool operator==(const SuperPolynomial& a, const SuperPolynomial& b);

  // Partial derivatives; the odd one is the left derivative.
  SuperPolynomial d_even(std::size_t i) const;
  SuperPolynomial d_odd(std::size_t j) const;

  // Value at the origin (coefficient of the constant monomial).
  Scalar constant_term() const;

  // Even/Odd when every term has that parity (zero counts as Even), nullopt
  // for mixed polynomials.
  std::optional<Parity> pure_parity() const;
  std::pair<SuperPolynomial, SuperPolynomial> parity_parts() const;

  // Canonical printing in the fixture grammar (round-trips through
  // parse_super_polynomial).
  std::string str() const;

 private:
  CoordSystemPtr sys_;
  std::map<Monomial, Scalar> terms_;
  void add_term(Monomial m, Scalar c);
  friend class SuperVectorField;
};

// ---------------------------------------------------------------------------
// Super vector fields

class SuperVectorField {
 public:
  // The zero field of the given system.
  explicit SuperVectorField(CoordSystemPtr sys);

  const CoordSystemPtr& system() const { return sys_; }
  // Coefficient of d_{x_i} / d_{xi_j}.
  const SuperPolynomial& even_coeff(std::size_t i) const { return even_[i]; }
  const SuperPolynomial& odd_coeff(std::size_t j) const { return odd_[j]; }
  SuperPolynomial& even_coeff(std::size_t i) { return even_[i]; }
  SuperPolynomial& odd_coeff(std::size_t j) { return odd_[j]; }
  bool is_zero() const;

  // Derivation action on a polynomial.
  SuperPolynomial apply(const SuperPolynomial& f) const;

  SuperVectorField& operator+=(const SuperVectorField& o);
  friend SuperVectorField operator+(SuperVectorField a, const SuperVectorField& b) { return a += b; }
  friend SuperVectorField operator-(const SuperVectorField& a, const SuperVectorField& b);
  SuperVectorField operator-() const;
  SuperVectorField operator*(const Scalar& c) const;
  // Left multiplication by a function: (f X)(g) = f * X(g).
  friend SuperVectorField operator*(const SuperPolynomial& f, const SuperVectorField& x);
  friend bool operator==(const SuperVectorField& a, const SuperVectorField& b);

  // Even/Odd when every coefficient term has that field parity (zero field
  // counts as Even), nullopt for mixed fields.
  std::optional<Parity> pure_parity() const;
  std::pair<SuperVectorField, SuperVectorField> parity_parts() const;

  // Canonical printing in the fixture grammar (round-trips through
  // parse_super_field).
  std::string str() const;

 private:
  CoordSystemPtr sys_;
  std::vector<SuperPolynomial> even_, odd_;
};

// [X, Y] = X Y - (-1)^{|X||Y|} Y X on coordinate functions; bilinear over
// parity parts for mixed inputs.  Throws std::invalid_argument when the two
// fields live in different coordinate systems.
SuperVectorField super_bracket(const SuperVectorField& x, const SuperVectorField& y);

// ---------------------------------------------------------------------------
// Odd contact structure on C^{1|7}
//
// Contact form omega = du - xi1 d xi4 - xi2 d xi5 - xi3 d xi6 - xi7 d xi7.
// The kernel distribution is framed by d_{xi1}, d_{xi2}, d_{xi3} and the
// hatted derivations  d^_{xi4} = d_{xi4} - xi1 d_u, d^_{xi5} = d_{xi5} -
// xi2 d_u, d^_{xi6} = d_{xi6} - xi3 d_u, d^_{xi7} = d_{xi7} - xi7 d_u.

using GeneratingFunction = SuperPolynomial;

// The seven frame fields of the contact distribution, in the order
// d_{xi1}, d_{xi2}, d_{xi3}, d^_{xi4}, d^_{xi5}, d^_{xi6}, d^_{xi7}.
std::vector<SuperVectorField> contact_frame();

// The contact field of a generating function:
//   X_f = f d_u - (-1)^{|f|} ( d^_{xi4}(f) d_{xi1} + d^_{xi5}(f) d_{xi2}
//         + d^_{xi6}(f) d_{xi3} + d_{xi1}(f) d^_{xi4} + d_{xi2}(f) d^_{xi5}
//         + d_{xi3}(f) d^_{xi6} + 1/2 d^_{xi7}(f) d^_{xi7} ),
// extended to mixed-parity f by linearity over parity parts.  The hatted
// derivative in the last coefficient (rather than the plain d_{xi7}) is
// forced by solving omega([X_f, D_a]) = 0 for the seven frame fields: the
// xi7 direction is self-paired under d omega with twice the weight of the
// three xi_i/xi_{i+3} pairings, and omega cannot see the difference (it is
// killed by xi7^2 = 0), so the choice is validated by the homomorphism
// property of the Lagrange bracket instead.
SuperVectorField contact_field(const GeneratingFunction& f);

// The contact-form pairing omega(X), in the sign convention under which
// generating_function(contact_field(f)) = f identically (the form
// coefficients multiply the contractions from the right):
//   omega(X) = X^u + X^{xi4} xi1 + X^{xi5} xi2 + X^{xi6} xi3 + X^{xi7} xi7.
GeneratingFunction generating_function(const SuperVectorField& x);

// True when X maps sections of the contact distribution to sections, i.e.
// omega([X, D_a]) = 0 for the seven frame fields D_a.
bool preserves_contact_structure(const SuperVectorField& x);

// [f, h] with X_{[f,h]} = [X_f, X_h]; recovered via generating_function and
// gated on that identity (std::logic_error if the bracket of the two contact
// fields is not itself a contact field).
GeneratingFunction lagrange_bracket(const GeneratingFunction& f, const GeneratingFunction& h);

// ---------------------------------------------------------------------------
// Closure verification for explicit field lists

struct FieldBasis {
  std::vector<SuperVectorField> fields;  // pure parity each
  std::vector<std::string> labels;       // aligned with fields
  std::vector<int> degrees;              // aligned with fields
};

struct ClosureVerdict {
  bool closed = true;
  std::string detail;  // offending pair and residual when not closed
  std::optional<JacobiFailure> jacobi;  // first Jacobi failure, if any
  bool pass() const { return closed && !jacobi; }
};

struct ClosureResult {
  // The induced structure table over the input basis order; present exactly
  // when every bracket decomposes over the span.
  std::optional<GradedLieSuperalgebra> algebra;
  ClosureVerdict verdict;
};

// Decomposes every pairwise bracket (and odd self-bracket) exactly over the
// span of the input fields.  Throws std::invalid_argument when the fields
// are not independent, not of pure parity, or live in different systems.
ClosureResult closure_check(const FieldBasis& basis);

// Super dimension of the linear span of a field list (parity parts are
// ranked separately; mixed-parity inputs are split first).
SuperDim field_span_dims(const std::vector<SuperVectorField>& fields);

// Evaluates all fields at the origin and compares the spanned super
// dimension with the expected one.
struct OriginSpanReport {
  SuperDim span;
  SuperDim expected;
  bool pass = false;
};
OriginSpanReport fundamental_field_check(const std::vector<SuperVectorField>& fields,
                                         SuperDim expected);

// ---------------------------------------------------------------------------
// The G_2 reduction: cubic annihilator inside der_0 of the contact symbol

// The contact Heisenberg algebra heis(1|7) in the frame basis: odd
// generators xi1..xi7 of degree -1 with [xi_i, xi_{i+3}] = z (i = 1, 2, 3)
// and [xi7, xi7] = 2 z for the even central z of degree -2 (the bracket
// table of the contact frame fields, with the overall sign absorbed into z).
SymbolAlgebra contact_heisenberg();

// Solves A . q = 0 over the prolongation level der_0(heis(1|7)), for the odd
// cubic q = e^147 + e^257 + e^367 - e^123 + e^456 on the degree -1 block,
// and appends the grading action (which rescales q).  The result is the
// conformal extension of the q-stabilizer: dims (15|0), derived algebra
// dims (14|0).
struct CubicAnnihilator {
  SuperDim ambient;         // der_0 dims
  SuperDim dims;            // annihilator + grading line
  SuperDim derived_dims;    // span of pairwise commutators
  std::vector<QMatrix> action;  // maps on the degree -1 block; grading last
  bool grading_appended = false;  // grading not already in the strict annihilator
};
CubicAnnihilator cubic_annihilator();

// ---------------------------------------------------------------------------
// Fixture grammar and the curated field lists
//
// Expressions: rational coefficients, coordinate names, juxtaposition (or
// '*') products, '+'/'-', parentheses, and first-order derivation factors
// D[coord] which must be the last factor of their term.  A sum mixes only
// polynomials with polynomials and fields with fields.

SuperPolynomial parse_super_polynomial(const std::string& text, const CoordSystemPtr& sys);
SuperVectorField parse_super_field(const std::string& text, const CoordSystemPtr& sys);

// Sectioned fixture file: '[name]' opens a section, '#' starts a comment,
// every other non-blank line is one expression of the open section.
std::map<std::string, std::vector<std::string>> read_fixture_sections(const std::string& path);

// FNV-1a 64-bit content hash, for freezing fixture files against accidental
// edits (the mathematical validation of the transcriptions is intrinsic:
// closure, Jacobi, dimension and origin-span gates).
std::uint64_t fnv1a64_file(const std::string& path);

// The odd contact realization of G(3): 17 even and 14 odd generating
// functions on C^{1|7}.  Degrees are derived from the contact weights
// (u -> 2, xi -> 1, contact degree = weight - 2); every function must be
// weight-homogeneous or parsing throws.
struct ContactRealization {
  std::vector<GeneratingFunction> even_functions;
  std::vector<GeneratingFunction> odd_functions;
  FieldBasis field_basis() const;  // contact fields, labels s0_*/s1_*
};
ContactRealization g3_contact_realization(const std::string& path = std::string());

// The flat realization of F(4) on C^{6|4}: 10 + (12 + 8) + (6 + 4) fields in
// degrees -1, 0, 1 (degrees derived from coefficient homogeneity).
struct FlatRealization {
  FieldBasis basis;
  std::size_t grading_index;  // position of the Euler field in `basis`
};
FlatRealization f4_flat_realization(const std::string& path = std::string());

}  // namespace g3f4
