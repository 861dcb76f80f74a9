#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <g3f4/geometry.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace g3f4;

namespace {

ParabolicId P(Algebra a, int xi, std::initializer_list<int> nodes) {
  return ParabolicId{DiagramId{a, xi}, Crossing(nodes)};
}

SuperDim sd(long e, long o) { return SuperDim{e, o}; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("growth vectors of reference cases") {
  GrowthVector g = growth_vector(build_symbol(P(Algebra::G3, 1, {1})));
  CHECK(g.levels == std::vector<SuperDim>{sd(0, 7), sd(1, 0)});
  CHECK(g.total() == sd(1, 7));
  CHECK(g.str() == "(0|7),(1|0)");

  GrowthVector f = growth_vector(build_symbol(P(Algebra::F4, 1, {4})));
  CHECK(f.levels == std::vector<SuperDim>{sd(6, 4)});

  GrowthVector b = growth_vector(build_symbol(P(Algebra::F4, 6, {1, 2, 3, 4})));
  CHECK(b.levels == std::vector<SuperDim>{sd(3, 1), sd(1, 2), sd(0, 2),
                                          sd(1, 1), sd(1, 0), sd(1, 0),
                                          sd(0, 1), sd(0, 1), sd(1, 0),
                                          sd(1, 0), sd(1, 0)});
}

TEST_CASE("atlas rendering is byte-exact against the golden files") {
  for (Algebra a : {Algebra::G3, Algebra::F4}) {
    std::string golden = slurp(std::string(G3F4_SOURCE_DIR) +
                               "/tests/golden/atlas_" + algebra_name(a) +
                               ".txt");
    CHECK(render_atlas(a) == golden);
  }
}

TEST_CASE("tangent spans: full cases and the four exceptional ones") {
  // Odd contact case: nondegenerate quadric, null cone spans everything.
  NullSpanReport r = null_span(build_symbol(P(Algebra::G3, 1, {1})));
  CHECK(r.g1 == sd(0, 7));
  CHECK(r.span == sd(0, 7));
  CHECK(r.full);
  CHECK(r.witnesses.size() == 7);

  NullSpanReport s = null_span(build_symbol(P(Algebra::G3, 2, {1})));
  CHECK(s.g1 == sd(2, 2));
  CHECK(s.span == sd(2, 1));
  CHECK(!s.full);

  CHECK(null_span(build_symbol(P(Algebra::G3, 3, {1, 3}))).span == sd(2, 1));
  CHECK(null_span(build_symbol(P(Algebra::G3, 4, {2, 3}))).span == sd(0, 2));
  CHECK(null_span(build_symbol(P(Algebra::G3, 4, {1, 2, 3}))).span == sd(1, 1));
}

TEST_CASE("special-case audit: 15 of 19 full on one algebra, all 55 on the other") {
  SpecialCasesReport g = special_cases_check(Algebra::G3);
  INFO(g.detail);
  CHECK(g.pass);
  REQUIRE(g.reports.size() == 19);
  int full = 0;
  for (const auto& r : g.reports) full += r.full ? 1 : 0;
  CHECK(full == 15);

  SpecialCasesReport f = special_cases_check(Algebra::F4);
  INFO(f.detail);
  CHECK(f.pass);
  REQUIRE(f.reports.size() == 55);
  for (const auto& r : f.reports) CHECK(r.full);
}

TEST_CASE("integral witnesses exist for every curated maximal-parabolic target") {
  for (Algebra a : {Algebra::G3, Algebra::F4}) {
    for (const auto& row : maximal_integral_targets(a)) {
      SymbolAlgebra m = build_symbol(row.parabolic);
      for (const SuperDim& t : row.targets) {
        CAPTURE(full_case_name(row.parabolic));
        CAPTURE(t.str());
        IntegralWitness w = integral_witness(m, t);
        CHECK(w.found);
        CHECK(w.basis.size() == static_cast<std::size_t>(t.total()));
        CHECK(w.labels.size() == w.basis.size());
      }
    }
  }
}

TEST_CASE("integral witness edge cases") {
  SymbolAlgebra m = build_symbol(P(Algebra::G3, 1, {2}));
  CHECK(integral_witness(m, sd(1, 0)).found);   // a single even vector
  CHECK(integral_witness(m, sd(1, 1)).found);
  CHECK(integral_witness(m, sd(0, 2)).found);
  CHECK(!integral_witness(m, sd(1, 2)).found);  // bounded search: none
  CHECK(!integral_witness(m, sd(9, 9)).found);  // larger than g_{-1}
}

TEST_CASE("case adjacency graph over canonical representatives") {
  auto edges = adjacency_graph(Algebra::G3);
  auto has = [&](ParabolicId a, ParabolicId b) {
    if (b < a) std::swap(a, b);
    for (const auto& e : edges)
      if (e.first == a && e.second == b) return true;
    return false;
  };
  CHECK(has(P(Algebra::G3, 1, {1}), P(Algebra::G3, 1, {1, 2})));
  CHECK(!has(P(Algebra::G3, 1, {1}), P(Algebra::G3, 1, {2, 3})));
  for (const auto& e : edges) {
    CHECK(e.first == canonical_representative(e.first));
    CHECK(e.second == canonical_representative(e.second));
    CHECK(e.first != e.second);
  }
  std::string text = render_graph(Algebra::G3);
  CHECK(text.find("# g3 case adjacency: 19 nodes") == 0);
  CHECK(text.find("I_1 I_12") != std::string::npos);
}

TEST_CASE("equivalence classes share growth and bracket ranks") {
  EquivalenceReport g = verify_equivalences(Algebra::G3);
  INFO(g.detail);
  CHECK(g.pass);
  EquivalenceReport f = verify_equivalences(Algebra::F4);
  INFO(f.detail);
  CHECK(f.pass);

  // Negative control: two inequivalent cases differ in growth.
  CHECK(!(growth_vector(build_symbol(P(Algebra::G3, 1, {1}))) ==
          growth_vector(build_symbol(P(Algebra::G3, 1, {2})))));
}

TEST_CASE("bracket ranks witness fundamentality at degree -2") {
  for (auto p : {P(Algebra::G3, 4, {2}), P(Algebra::F4, 1, {1})}) {
    SymbolAlgebra m = build_symbol(p);
    auto ranks = bracket_rank_table(m);
    auto dims = m.alg.graded_dims();
    if (!dims.count(-2)) continue;
    CHECK(ranks.at({-1, -1}) ==
          static_cast<std::size_t>(dims.at(-2).total()));
  }
}
