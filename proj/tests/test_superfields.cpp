// Polynomial super vector fields: exact arithmetic, super brackets, the odd
// contact machinery on C^{1|7}, the cubic annihilator inside der_0 of the
// contact Heisenberg algebra, and closure of the curated coordinate
// realizations of G(3) and F(4).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <g3f4/build.hpp>
#include <g3f4/superfields.hpp>

#include <random>
#include <set>
#include <stdexcept>

using namespace g3f4;

namespace {

SuperPolynomial P(const std::string& s, const CoordSystemPtr& sys) {
  return parse_super_polynomial(s, sys);
}
SuperVectorField V(const std::string& s, const CoordSystemPtr& sys) {
  return parse_super_field(s, sys);
}

// Graded Jacobi residual in cyclic form:
//   (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]].
SuperVectorField jacobi_residual(const SuperVectorField& x, const SuperVectorField& y,
                                 const SuperVectorField& z) {
  const int px = *x.pure_parity(), py = *y.pure_parity(), pz = *z.pure_parity();
  SuperVectorField r = super_bracket(x, super_bracket(y, z)) * sign_pow(px * pz);
  r += super_bracket(y, super_bracket(z, x)) * sign_pow(py * px);
  r += super_bracket(z, super_bracket(x, y)) * sign_pow(pz * py);
  return r;
}

}  // namespace

TEST_CASE("super polynomial arithmetic and canonical form") {
  const auto c = contact_coords();
  CHECK(P("xi2 xi1", c) == -P("xi1 xi2", c));
  CHECK(P("xi1 xi1", c).is_zero());
  CHECK(P("xi1 xi2 xi3", c) == P("xi3 xi1 xi2", c));
  CHECK(P("xi1 xi2 xi3", c) == -P("xi2 xi1 xi3", c));
  CHECK(P("u u", c) == P("u", c) * P("u", c));
  CHECK(P("2 u - u - u", c).is_zero());
  CHECK(P("1/2 u + 1/3 u", c) == P("5/6 u", c));

  CHECK(P("3 + u xi1 xi2", c).constant_term() == Scalar(3));
  CHECK(P("u xi1", c).constant_term() == Scalar(0));

  CHECK(P("1 + xi1 xi2", c).pure_parity() == Even);
  CHECK(P("xi1 + u xi2", c).pure_parity() == Odd);
  CHECK(P("0", c).pure_parity() == Even);
  CHECK(!P("1 + xi1", c).pure_parity().has_value());
  const auto [ev, od] = P("u + xi1 + xi2 xi3", c).parity_parts();
  CHECK(ev == P("u + xi2 xi3", c));
  CHECK(od == P("xi1", c));

  // Derivatives: d_even is the usual partial, d_odd the left derivative.
  CHECK(P("u u", c).d_even(0) == P("2 u", c));
  CHECK(P("xi1 xi2", c).d_odd(0) == P("xi2", c));
  CHECK(P("xi1 xi2", c).d_odd(1) == -P("xi1", c));
  CHECK(P("xi1 xi2 xi3", c).d_odd(2) == P("xi1 xi2", c));

  // Left Leibniz rule d(fg) = d(f) g + (-1)^{|f|} f d(g) for pure-parity f.
  const auto leibniz = [&](const SuperPolynomial& f, const SuperPolynomial& g,
                           std::size_t j) {
    const Scalar s = sign_pow(*f.pure_parity());
    return (f * g).d_odd(j) == f.d_odd(j) * g + (f * g.d_odd(j)) * s;
  };
  CHECK(leibniz(P("xi1", c), P("xi2 xi3", c), 1));
  CHECK(leibniz(P("xi1 xi4", c), P("xi2 + xi4 xi5 xi6", c), 3));
  CHECK(leibniz(P("u xi7", c), P("xi7 + xi1 xi2 xi7", c), 6));
}

TEST_CASE("field action, parity split and module structure") {
  const auto r = realization_coords();
  const SuperVectorField x = V("xi1 D[x1] + x2 D[xi2]", r);
  CHECK(x.pure_parity() == Odd);
  CHECK(x.apply(P("x1", r)) == P("xi1", r));
  CHECK(x.apply(P("xi2", r)) == P("x2", r));
  CHECK(x.apply(P("x1 xi2", r)) == P("xi1 xi2 + x1 x2", r));

  const SuperVectorField mixed = V("D[x1] + D[xi1]", r);
  CHECK(!mixed.pure_parity().has_value());
  const auto [me, mo] = mixed.parity_parts();
  CHECK(me == V("D[x1]", r));
  CHECK(mo == V("D[xi1]", r));

  // Left multiplication by a function: (f X)(g) = f * X(g).
  const SuperPolynomial f = P("xi3 + x2 xi4", r);
  const SuperPolynomial g = P("x1 x1 + xi2 xi4", r);
  CHECK((f * x).apply(g) == f * x.apply(g));

  CHECK((x - x).is_zero());
  CHECK(x * Scalar(-2) == -(x + x));
}

TEST_CASE("super bracket of vector fields") {
  const auto r = realization_coords();
  CHECK(super_bracket(V("D[x1]", r), V("D[x2]", r)).is_zero());
  CHECK(super_bracket(V("D[xi1]", r), V("xi1 D[x1]", r)) == V("D[x1]", r));

  // Odd self-brackets: [X, X] = 2 X^2 as an operator.
  CHECK(super_bracket(V("xi1 D[x1]", r), V("xi1 D[x1]", r)).is_zero());
  CHECK(super_bracket(V("xi1 D[x1] + x1 D[xi1]", r), V("xi1 D[x1] + x1 D[xi1]", r)) ==
        V("2 x1 D[x1] + 2 xi1 D[xi1]", r));

  // Graded antisymmetry [x, y] = -(-1)^{|x||y|}[y, x] on sample pairs.
  const SuperVectorField a = V("x1 D[x2] + xi3 D[xi4]", r);  // even
  const SuperVectorField b = V("xi1 D[x3] + x2 x4 D[xi2]", r);  // odd
  CHECK(super_bracket(a, b) == -super_bracket(b, a));
  // Jacobi consequence for odd b: [b, [b, b]] = 0.
  CHECK(super_bracket(b, super_bracket(b, b)).is_zero());

  CHECK_THROWS_AS(super_bracket(V("D[x1]", r), V("D[u]", contact_coords())),
                  std::invalid_argument);

  // Graded Jacobi identity on random triples from the F(4) realization.
  const FlatRealization real = f4_flat_realization();
  std::mt19937 rng(20260816u);
  std::uniform_int_distribution<std::size_t> pick(0, real.basis.fields.size() - 1);
  for (int t = 0; t < 25; ++t) {
    const auto& x = real.basis.fields[pick(rng)];
    const auto& y = real.basis.fields[pick(rng)];
    const auto& z = real.basis.fields[pick(rng)];
    CHECK(jacobi_residual(x, y, z).is_zero());
  }
}

TEST_CASE("contact fields and generating function recovery") {
  const auto c = contact_coords();

  // Closed forms derived from the defining formula.
  CHECK(contact_field(P("1", c)) == V("D[u]", c));
  CHECK(contact_field(P("xi1", c)) == V("D[xi4]", c));
  CHECK(contact_field(P("xi7", c)) == V("1/2 xi7 D[u] + 1/2 D[xi7]", c));
  CHECK(contact_field(P("xi4", c)) == V("xi4 D[u] + D[xi1]", c));
  CHECK(contact_field(P("u", c)) ==
        V("u D[u] + xi1 D[xi1] + xi2 D[xi2] + xi3 D[xi3] + 1/2 xi7 D[xi7]", c));

  // Frame brackets reproduce the contact Heisenberg relations.
  const auto frame = contact_frame();
  REQUIRE(frame.size() == 7);
  const SuperVectorField du = V("D[u]", c);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i; j < 7; ++j) {
      const SuperVectorField br = super_bracket(frame[i], frame[j]);
      if ((i == 0 && j == 3) || (i == 1 && j == 4) || (i == 2 && j == 5)) {
        CHECK(br == -du);
      } else if (i == 6 && j == 6) {
        CHECK(br == du * Scalar(-2));
      } else {
        CHECK(br.is_zero());
      }
    }

  // omega(X_f) = f and contact preservation for every curated generating
  // function, and for a mixed-parity combination.
  const ContactRealization real = g3_contact_realization();
  REQUIRE(real.even_functions.size() == 17);
  REQUIRE(real.odd_functions.size() == 14);
  std::vector<GeneratingFunction> all = real.even_functions;
  all.insert(all.end(), real.odd_functions.begin(), real.odd_functions.end());
  for (const auto& f : all) {
    const SuperVectorField xf = contact_field(f);
    CHECK(generating_function(xf) == f);
    CHECK(preserves_contact_structure(xf));
  }
  const GeneratingFunction mix = real.even_functions[7] + real.odd_functions[8];
  CHECK(generating_function(contact_field(mix)) == mix);

  // Fields that do not preserve the contact distribution.
  CHECK_FALSE(preserves_contact_structure(V("xi1 D[u]", c)));
  CHECK_FALSE(preserves_contact_structure(V("u D[u]", c)));
}

TEST_CASE("lagrange bracket") {
  const auto c = contact_coords();
  CHECK(lagrange_bracket(P("1", c), P("u", c)) == P("1", c));
  CHECK(lagrange_bracket(P("xi7", c), P("xi7", c)) == P("1/2", c));
  CHECK(lagrange_bracket(P("xi1", c), P("xi4", c)) == P("1", c));
  CHECK(lagrange_bracket(P("xi1", c), P("xi5", c)).is_zero());

  // The bracket is computed as omega([X_f, X_h]) and gated on the
  // homomorphism identity X_{[f,h]} = [X_f, X_h]; running it over all pairs
  // of curated generating functions exercises that gate 31 x 31 times.
  const ContactRealization real = g3_contact_realization();
  std::vector<GeneratingFunction> all = real.even_functions;
  all.insert(all.end(), real.odd_functions.begin(), real.odd_functions.end());
  for (const auto& f : all)
    for (const auto& h : all) CHECK_NOTHROW(lagrange_bracket(f, h));

  // Graded antisymmetry through the correspondence.
  const auto& f = real.odd_functions[9];
  const auto& h = real.odd_functions[12];
  CHECK(lagrange_bracket(f, h) == lagrange_bracket(h, f));           // odd, odd
  CHECK(lagrange_bracket(all[3], h) == -lagrange_bracket(h, all[3]));  // even, odd
}

TEST_CASE("G(3) contact realization closes with dimension (17|14)") {
  const ContactRealization real = g3_contact_realization();
  const FieldBasis basis = real.field_basis();
  REQUIRE(basis.fields.size() == 31);

  const ClosureResult res = closure_check(basis);
  REQUIRE(res.algebra.has_value());
  CHECK(res.verdict.pass());
  CHECK(res.verdict.detail.empty());
  CHECK(!res.verdict.jacobi.has_value());
  CHECK(res.algebra->super_dim() == SuperDim{17, 14});

  const std::map<int, SuperDim> expected = {
      {-2, {1, 0}}, {-1, {0, 7}}, {0, {15, 0}}, {1, {0, 7}}, {2, {1, 0}}};
  CHECK(res.algebra->graded_dims() == expected);

  CHECK(field_span_dims(basis.fields) == SuperDim{17, 14});
  CHECK(fundamental_field_check(basis.fields, SuperDim{1, 7}).pass);
}

TEST_CASE("cubic annihilator cuts der_0 of heis(1|7) to the conformal stabilizer") {
  const SymbolAlgebra heis = contact_heisenberg();
  CHECK(heis.alg.super_dim() == SuperDim{1, 7});
  CHECK(heis.alg.check_jacobi() == std::nullopt);

  const CubicAnnihilator ann = cubic_annihilator();
  CHECK(ann.ambient == SuperDim{22, 0});
  CHECK(ann.dims == SuperDim{15, 0});
  CHECK(ann.derived_dims == SuperDim{14, 0});
  CHECK(ann.grading_appended);
  CHECK(ann.action.size() == 15);

  // Cross-check against the root-theoretic construction: the degree-0 block
  // of G(3) in the contact grading acts on g_{-1} with the same span and
  // derived-span dimensions.
  const DiagramId d{Algebra::G3, 1};
  const ParabolicId p{d, Crossing{1}};
  const std::vector<LeviMap> levi = levi_action(build_full(d), p);
  REQUIRE(levi.size() == 15);
  std::vector<Vec> flats;
  for (const auto& m : levi) {
    CHECK(m.parity == Even);
    Vec v;
    for (std::size_t r = 0; r < m.map.mat.rows(); ++r)
      for (std::size_t cc = 0; cc < m.map.mat.cols(); ++cc)
        v.push_back(m.map.mat.at(r, cc));
    flats.push_back(std::move(v));
  }
  CHECK(QMatrix::from_rows(flats).rank() == 15);
  std::vector<Vec> comms;
  for (std::size_t a = 0; a < levi.size(); ++a)
    for (std::size_t b = a + 1; b < levi.size(); ++b) {
      const QMatrix m =
          levi[a].map.mat * levi[b].map.mat - levi[b].map.mat * levi[a].map.mat;
      Vec v;
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t cc = 0; cc < m.cols(); ++cc) v.push_back(m.at(r, cc));
      comms.push_back(std::move(v));
    }
  CHECK(QMatrix::from_rows(comms).rank() == 14);
}

TEST_CASE("F(4) flat realization closes with dimension (24|16)") {
  const FlatRealization real = f4_flat_realization();
  REQUIRE(real.basis.fields.size() == 40);

  const ClosureResult res = closure_check(real.basis);
  REQUIRE(res.algebra.has_value());
  CHECK(res.verdict.pass());
  CHECK(!res.verdict.jacobi.has_value());
  CHECK(res.algebra->super_dim() == SuperDim{24, 16});

  const std::map<int, SuperDim> expected = {{-1, {6, 4}}, {0, {12, 8}}, {1, {6, 4}}};
  CHECK(res.algebra->graded_dims() == expected);

  // The grading field acts diagonally: [E, X] = deg(X) X for every basis field.
  REQUIRE(real.grading_index == 21);
  const SuperVectorField& euler = real.basis.fields[real.grading_index];
  for (std::size_t i = 0; i < real.basis.fields.size(); ++i) {
    if (i == real.grading_index) continue;
    CHECK(super_bracket(euler, real.basis.fields[i]) ==
          real.basis.fields[i] * Scalar(real.basis.degrees[i]));
  }

  // The degree-0 block is the direct sum of the grading line and a simple
  // part: its derived algebra has dimension (11|8).
  std::vector<SuperVectorField> deg0;
  for (std::size_t i = 0; i < real.basis.fields.size(); ++i)
    if (real.basis.degrees[i] == 0) deg0.push_back(real.basis.fields[i]);
  REQUIRE(deg0.size() == 20);
  CHECK(field_span_dims(deg0) == SuperDim{12, 8});
  std::vector<SuperVectorField> derived;
  for (std::size_t a = 0; a < deg0.size(); ++a)
    for (std::size_t b = a; b < deg0.size(); ++b) {
      if (a == b && deg0[a].pure_parity() == Even) continue;
      derived.push_back(super_bracket(deg0[a], deg0[b]));
    }
  CHECK(field_span_dims(derived) == SuperDim{11, 8});

  // Origin spans: the whole realization is transitive, the degree-1 block
  // vanishes at the origin.
  CHECK(fundamental_field_check(real.basis.fields, SuperDim{6, 4}).pass);
  std::vector<SuperVectorField> deg1;
  for (std::size_t i = 0; i < real.basis.fields.size(); ++i)
    if (real.basis.degrees[i] == 1) deg1.push_back(real.basis.fields[i]);
  CHECK(fundamental_field_check(deg1, SuperDim{0, 0}).pass);
}

TEST_CASE("closure_check diagnostics") {
  const auto r = realization_coords();

  FieldBasis dependent;
  dependent.fields = {V("D[x1]", r), V("2 D[x1]", r)};
  dependent.labels = {"a", "b"};
  dependent.degrees = {-1, -1};
  CHECK_THROWS_AS(closure_check(dependent), std::invalid_argument);

  FieldBasis mixed;
  mixed.fields = {V("D[x1] + D[xi1]", r)};
  mixed.labels = {"a"};
  mixed.degrees = {-1};
  CHECK_THROWS_AS(closure_check(mixed), std::invalid_argument);

  FieldBasis open_basis;
  open_basis.fields = {V("D[x1]", r), V("x1 x1 D[x1]", r)};
  open_basis.labels = {"flat", "quad"};
  open_basis.degrees = {-1, 1};
  const ClosureResult res = closure_check(open_basis);
  CHECK_FALSE(res.verdict.closed);
  CHECK_FALSE(res.verdict.pass());
  CHECK(!res.algebra.has_value());
  CHECK(res.verdict.detail.find("flat") != std::string::npos);
  CHECK(res.verdict.detail.find("quad") != std::string::npos);

  FieldBasis empty;
  CHECK_THROWS_AS(closure_check(empty), std::invalid_argument);
}

TEST_CASE("fixture files are intact and well formed") {
  const std::string g3_path =
      std::string(G3F4_SOURCE_DIR) + "/tests/fixtures/contact_g3.txt";
  const std::string f4_path =
      std::string(G3F4_SOURCE_DIR) + "/tests/fixtures/f4_fields.txt";

  const auto g3 = read_fixture_sections(g3_path);
  REQUIRE(g3.count("s0") == 1);
  REQUIRE(g3.count("s1") == 1);
  CHECK(g3.at("s0").size() == 17);
  CHECK(g3.at("s1").size() == 14);

  const auto f4 = read_fixture_sections(f4_path);
  CHECK(f4.at("gm1").size() == 10);
  CHECK(f4.at("g0_even").size() == 12);
  CHECK(f4.at("g0_odd").size() == 8);
  CHECK(f4.at("g1_even").size() == 6);
  CHECK(f4.at("g1_odd").size() == 4);

  CHECK(fnv1a64_file(g3_path) == 0x832afedae8522516ull);
  CHECK(fnv1a64_file(f4_path) == 0xdfb20bbe8b5ba1d9ull);

  CHECK_THROWS_AS(read_fixture_sections("/nonexistent/fixture.txt"), std::runtime_error);
  CHECK_THROWS_AS(fnv1a64_file("/nonexistent/fixture.txt"), std::runtime_error);
}

TEST_CASE("fixture grammar round trip and parse errors") {
  const auto c = contact_coords();
  const auto r = realization_coords();

  // Every curated expression round-trips through its printed form.
  const std::string g3_path =
      std::string(G3F4_SOURCE_DIR) + "/tests/fixtures/contact_g3.txt";
  for (const auto& [name, lines] : read_fixture_sections(g3_path))
    for (const auto& line : lines) {
      const SuperPolynomial p = P(line, c);
      CHECK(P(p.str(), c) == p);
    }
  const std::string f4_path =
      std::string(G3F4_SOURCE_DIR) + "/tests/fixtures/f4_fields.txt";
  for (const auto& [name, lines] : read_fixture_sections(f4_path))
    for (const auto& line : lines) {
      const SuperVectorField f = V(line, r);
      CHECK(V(f.str(), r) == f);
    }

  CHECK(V("0", r).is_zero());
  CHECK(P("2 * xi1 * xi2", c) == P("2 xi1 xi2", c));
  CHECK(P("-(u - xi1 xi2)", c) == P("xi1 xi2 - u", c));

  CHECK_THROWS_AS(P("y1", c), std::invalid_argument);            // unknown coordinate
  CHECK_THROWS_AS(V("D[y1]", r), std::invalid_argument);         // unknown coordinate
  CHECK_THROWS_AS(V("D[x1] x1", r), std::invalid_argument);      // derivation not last
  CHECK_THROWS_AS(V("D[x1] D[x2]", r), std::invalid_argument);   // derivation not last
  CHECK_THROWS_AS(P("u + D[u]", c), std::invalid_argument);      // mixed-kind sum
  CHECK_THROWS_AS(P("(u", c), std::invalid_argument);            // unbalanced paren
  CHECK_THROWS_AS(P("u )", c), std::invalid_argument);           // trailing input
  CHECK_THROWS_AS(P("2 *", c), std::invalid_argument);           // dangling product
  CHECK_THROWS_AS(P("", c), std::invalid_argument);              // empty input
  CHECK_THROWS_AS(P("u ^ 2", c), std::invalid_argument);         // unknown character
  CHECK_THROWS_AS(P("D[u]", c), std::invalid_argument);          // field, not polynomial
  CHECK_THROWS_AS(V("u", c), std::invalid_argument);             // polynomial, not field
  CHECK_THROWS_AS(V("D[]", r), std::invalid_argument);           // missing coordinate
}
