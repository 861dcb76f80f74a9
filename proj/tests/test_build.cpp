#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <g3f4/build.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace g3f4;

namespace {

ParabolicId P(Algebra a, int xi, std::initializer_list<int> nodes) {
  return ParabolicId{DiagramId{a, xi}, Crossing(nodes)};
}

Crossing all_nodes(Algebra a) {
  Crossing c;
  for (int k = 1; k <= rank(a); ++k) c.insert(k);
  return c;
}

std::vector<DiagramId> all_ten() {
  std::vector<DiagramId> out;
  for (Algebra a : {Algebra::G3, Algebra::F4})
    for (const auto& d : all_diagrams(a)) out.push_back(d);
  return out;
}

std::vector<ParabolicId> every_parabolic() {
  std::vector<ParabolicId> out;
  for (Algebra a : {Algebra::G3, Algebra::F4})
    for (const auto& p : all_parabolics(a)) out.push_back(p);
  return out;  // 28 + 90 = 118
}

std::vector<int> vsum(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return s;
}

SuperDim dims_of(const GradedLieSuperalgebra& a,
                 const std::vector<std::size_t>& idx) {
  SuperDim d;
  for (std::size_t i : idx) (a.element(i).parity == Even ? d.even : d.odd)++;
  return d;
}

// Flatten a LeviMap matrix row-major into a dense vector.
Vec flat(const QMatrix& m) {
  Vec v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) v.push_back(m.at(r, c));
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// 1. Half tables

TEST_CASE("half tables: pins, coverage, nonzero constants") {
  for (const auto& d : all_ten()) {
    for (const HalfTable* t : {&borel_negative(d), &borel_positive(d)}) {
      CAPTURE(algebra_name(d.alg));
      CAPTURE(diagram_name(d));
      // Every non-simple root has a pinned pair with stored constant 1.
      for (std::size_t g = 0; g < t->roots.size(); ++g) {
        if (std::abs(t->roots[g].height()) < 2) continue;
        auto pit = t->pins.find(g);
        REQUIRE(pit != t->pins.end());
        const auto& [i, j] = pit->second;
        CHECK(vsum(t->roots[i].m, t->roots[j].m) == t->roots[g].m);
        CHECK(t->constants.at(pit->second) == Scalar(1));
      }
      // Constants exist exactly for the root-sum pairs, and are nonzero.
      std::size_t expected = 0;
      for (std::size_t i = 0; i < t->roots.size(); ++i)
        for (std::size_t j = i; j < t->roots.size(); ++j) {
          if (i == j && t->roots[i].parity == Even) continue;
          const bool is_pair = t->index.count(vsum(t->roots[i].m,
                                                   t->roots[j].m)) > 0;
          CHECK(is_pair == (t->constants.count({i, j}) > 0));
          if (is_pair) ++expected;
        }
      CHECK(t->constants.size() == expected);
      for (const auto& [pr, c] : t->constants) {
        CAPTURE(pr.first);
        CAPTURE(pr.second);
        CHECK_FALSE(c == Scalar(0));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 2. Symbol algebras

TEST_CASE("symbol: (g3, IV, {2}) graded dimensions") {
  auto s = build_symbol(P(Algebra::G3, 4, {2}));
  auto gd = s.alg.graded_dims();
  REQUIRE(gd.size() == 3);
  CHECK(gd.at(-1) == SuperDim{2, 4});
  CHECK(gd.at(-2) == SuperDim{1, 2});
  CHECK(gd.at(-3) == SuperDim{2, 0});
}

TEST_CASE("symbol: Borel brackets are nonzero exactly on root sums") {
  for (const auto& p : {P(Algebra::G3, 1, {1, 2, 3}),
                        P(Algebra::F4, 1, {1, 2, 3, 4})}) {
    auto s = build_symbol(p);
    CHECK_FALSE(s.alg.check_jacobi().has_value());
    std::set<std::vector<int>> roots;
    for (const auto& r : s.roots) roots.insert(r.m);
    for (std::size_t i = 0; i < s.alg.size(); ++i)
      for (std::size_t j = i; j < s.alg.size(); ++j) {
        if (i == j && s.roots[i].parity == Even) continue;
        SparseVec v = s.alg.bracket_basis(i, j);
        const bool is_pair = roots.count(vsum(s.roots[i].m, s.roots[j].m)) > 0;
        CAPTURE(s.roots[i].m_str());
        CAPTURE(s.roots[j].m_str());
        CHECK(v.empty() == !is_pair);
        if (is_pair) {
          REQUIRE(v.size() == 1);
          CHECK(s.roots[v[0].first].m == vsum(s.roots[i].m, s.roots[j].m));
        }
      }
  }
}

TEST_CASE("symbol: Jacobi and level dimensions for every parabolic") {
  for (const auto& p : every_parabolic()) {
    CAPTURE(full_case_name(p));
    auto s = build_symbol(p);
    CHECK_FALSE(s.alg.check_jacobi().has_value());
    auto want = negative_level_dims(p);
    auto got = s.alg.graded_dims();
    CHECK(got.size() == want.size());
    for (const auto& [k, dd] : want) {
      REQUIRE(got.count(k));
      CHECK(got.at(k) == dd);
    }
  }
}

TEST_CASE("symbol: g_{-1} generates every deeper level") {
  for (Algebra a : {Algebra::G3, Algebra::F4})
    for (const auto& p : canonical_parabolics(a)) {
      CAPTURE(full_case_name(p));
      auto s = build_symbol(p);
      std::map<int, std::vector<std::size_t>> blk;
      for (std::size_t i = 0; i < s.alg.size(); ++i)
        blk[s.alg.element(i).degree].push_back(i);
      for (int k = 2; k <= depth(p); ++k) {
        const auto& b1 = blk.at(-1);
        const auto& bp = blk.at(-(k - 1));
        const auto& bt = blk.at(-k);
        std::map<std::size_t, std::size_t> col;
        for (std::size_t c = 0; c < bt.size(); ++c) col[bt[c]] = c;
        QMatrix m(b1.size() * bp.size(), bt.size());
        std::size_t row = 0;
        for (std::size_t x : b1)
          for (std::size_t y : bp) {
            for (const auto& [t, v] : s.alg.bracket_basis(x, y))
              m.at(row, col.at(t)) = v;
            ++row;
          }
        CAPTURE(k);
        CHECK(m.rank() == bt.size());
      }
    }
}

// ---------------------------------------------------------------------------
// 3. Full algebras

TEST_CASE("full: dimensions and Cartan") {
  for (const auto& d : all_ten()) {
    CAPTURE(algebra_name(d.alg));
    CAPTURE(diagram_name(d));
    const auto& f = build_full(d);
    const SuperDim want = (d.alg == Algebra::G3) ? SuperDim{17, 14}
                                                 : SuperDim{24, 16};
    CHECK(f.alg.super_dim() == want);
    CHECK(f.rank_ == std::size_t(rank(d.alg)));
    CHECK(f.alg.size() == 2 * f.n_roots() + f.rank_);
    // Cartan is abelian.
    for (std::size_t i = 0; i < f.rank_; ++i)
      for (std::size_t j = 0; j < f.rank_; ++j)
        CHECK(f.alg.bracket_basis(f.cartan_index(i), f.cartan_index(j))
                  .empty());
  }
}

TEST_CASE("full: Cartan acts diagonally with coefficient weights") {
  for (const auto& d : {DiagramId{Algebra::G3, 1}, DiagramId{Algebra::F4, 3}}) {
    const auto& f = build_full(d);
    for (std::size_t j = 0; j < f.rank_; ++j) {
      for (std::size_t i = 0; i < f.n_roots(); ++i) {
        for (bool positive : {false, true}) {
          const auto& rv = positive ? f.pos_roots[i] : f.neg_roots[i];
          const std::size_t idx =
              positive ? f.pos_index(i) : f.neg_index(i);
          SparseVec v = f.alg.bracket_basis(f.cartan_index(j), idx);
          if (rv.m[j] == 0) {
            CHECK(v.empty());
          } else {
            REQUIRE(v.size() == 1);
            CHECK(v[0].first == idx);
            CHECK(v[0].second == Scalar(rv.m[j]));
          }
        }
      }
    }
  }
}

// [[e_a, e_{-a}], e_b] = kappa_a(b) e_b with kappa_a = 2<.,a>/<a,a> for
// non-isotropic a and <.,a> for isotropic a — the normalization contract,
// recomputed here from the ambient pairing alone.
TEST_CASE("full: mirror brackets give coroots") {
  for (const auto& d : {DiagramId{Algebra::G3, 2}, DiagramId{Algebra::F4, 4}}) {
    const auto& f = build_full(d);
    for (std::size_t i = 0; i < f.n_roots(); ++i) {
      const AmbientWeight& a = f.pos_roots[i].ambient;
      SparseVec t = f.alg.bracket_basis(f.pos_index(i), f.neg_index(i));
      REQUIRE_FALSE(t.empty());
      for (const auto& [k, c] : t) {
        (void)c;
        CHECK(k >= f.n_roots());
        CHECK(k < f.n_roots() + f.rank_);
      }
      const Scalar aa = killing_pairing(a, a);
      for (std::size_t bi = 0; bi < f.n_roots(); ++bi) {
        for (bool positive : {false, true}) {
          const auto& rb = positive ? f.pos_roots[bi] : f.neg_roots[bi];
          const std::size_t idx =
              positive ? f.pos_index(bi) : f.neg_index(bi);
          Scalar kappa = killing_pairing(rb.ambient, a);
          if (!(aa == Scalar(0))) kappa = Scalar(2) * kappa / aa;
          SparseVec got;
          for (const auto& [k, c] : t)
            got = sparse_add(got, sparse_scale(c, f.alg.bracket_basis(k, idx)));
          CAPTURE(f.pos_roots[i].m_str());
          CAPTURE(rb.m_str());
          if (kappa == Scalar(0)) {
            CHECK(got.empty());
          } else {
            REQUIRE(got.size() == 1);
            CHECK(got[0].first == idx);
            CHECK(got[0].second == kappa);
          }
        }
      }
    }
  }
}

TEST_CASE("full: brackets are nonzero exactly on root sums") {
  for (const auto& d : {DiagramId{Algebra::G3, 1}, DiagramId{Algebra::F4, 1}}) {
    const auto& f = build_full(d);
    const std::size_t n = f.n_roots();
    auto root_of = [&](std::size_t v) -> const RootVector& {
      return v < n ? f.neg_roots[v] : f.pos_roots[v - n - f.rank_];
    };
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      idx.push_back(f.neg_index(i));
      idx.push_back(f.pos_index(i));
    }
    for (std::size_t x : idx)
      for (std::size_t y : idx) {
        const RootVector &rx = root_of(x), &ry = root_of(y);
        SparseVec v = f.alg.bracket_basis(x, y);
        AmbientWeight sum = rx.ambient + ry.ambient;
        CAPTURE(rx.m_str());
        CAPTURE(ry.m_str());
        if (sum.is_zero()) {
          REQUIRE_FALSE(v.empty());
          for (const auto& [k, c] : v) {
            (void)c;
            CHECK(k >= n);
            CHECK(k < n + f.rank_);
          }
        } else if (is_root(d.alg, sum)) {
          if (x == y && rx.parity == Even) {
            CHECK(v.empty());  // storage convention: even diagonals vanish
          } else {
            REQUIRE(v.size() == 1);
            CHECK(v[0].first == f.root_index(vsum(rx.m, ry.m)));
          }
        } else {
          CHECK(v.empty());
        }
      }
  }
}

// ---------------------------------------------------------------------------
// 4. Graded parts

TEST_CASE("graded parts: block dimensions") {
  {
    const auto& f = build_full(DiagramId{Algebra::G3, 4});
    auto parts = graded_parts(f, P(Algebra::G3, 4, {2}));
    CHECK(dims_of(f.alg, parts.at(0)) == SuperDim{7, 2});
    CHECK(dims_of(f.alg, parts.at(-1)) == SuperDim{2, 4});
  }
  {
    const auto& f = build_full(DiagramId{Algebra::F4, 1});
    auto parts = graded_parts(f, P(Algebra::F4, 1, {4}));
    CHECK(dims_of(f.alg, parts.at(-1)) == SuperDim{6, 4});
    CHECK(dims_of(f.alg, parts.at(0)) == SuperDim{12, 8});
    CHECK(parts.size() == 3);  // depth 1
  }
  // Internal symmetry/range validation across every parabolic.
  for (const auto& p : every_parabolic()) {
    const auto& f = build_full(p.diagram);
    auto parts = graded_parts(f, p);
    CHECK(int(parts.size()) == 2 * depth(p) + 1);
    SuperDim tot;
    for (const auto& [k, v] : parts) {
      (void)k;
      tot += dims_of(f.alg, v);
    }
    CHECK(tot == f.alg.super_dim());
  }
}

// ---------------------------------------------------------------------------
// 5. Levi action

namespace {

// Dense matrix of the grading element's action: sum of the h_k maps, k in chi.
QMatrix grading_element_matrix(const std::vector<LeviMap>& maps,
                               const Crossing& chi, std::size_t t) {
  QMatrix sum(t, t);
  for (int k : chi) {
    const std::string label = "h" + std::to_string(k);
    auto it = std::find_if(maps.begin(), maps.end(),
                           [&](const LeviMap& m) { return m.label == label; });
    REQUIRE(it != maps.end());
    sum = sum + it->map.mat;
  }
  return sum;
}

}  // namespace

TEST_CASE("levi action: grading element is minus the identity") {
  for (Algebra a : {Algebra::G3, Algebra::F4})
    for (const auto& p : canonical_parabolics(a)) {
      CAPTURE(full_case_name(p));
      const auto& f = build_full(p.diagram);
      auto maps = levi_action(f, p);
      auto parts = graded_parts(f, p);
      CHECK(maps.size() == parts.at(0).size());
      const std::size_t t = std::size_t(
          dims_of(f.alg, parts.at(-1)).total());
      QMatrix g = grading_element_matrix(maps, p.crossing, t);
      CHECK(g == QMatrix::identity(t) * Scalar(-1));
    }
}

TEST_CASE("levi action: degree-zero dimensions of the dark cases") {
  const std::vector<std::pair<ParabolicId, SuperDim>> cases = {
      {P(Algebra::G3, 1, {1}), SuperDim{15, 0}},
      {P(Algebra::G3, 3, {1}), SuperDim{7, 6}},
      {P(Algebra::F4, 1, {1}), SuperDim{22, 0}},
      {P(Algebra::F4, 1, {4}), SuperDim{12, 8}},
      {P(Algebra::F4, 3, {3}), SuperDim{10, 8}},
  };
  for (const auto& [p, want] : cases) {
    CAPTURE(full_case_name(p));
    CHECK(is_dark(p));
    auto maps = levi_action(build_full(p.diagram), p);
    SuperDim got;
    for (const auto& m : maps) (m.parity == Even ? got.even : got.odd)++;
    CHECK(got == want);

    // Faithful: the flattened matrices are linearly independent.
    const std::size_t t = maps[0].map.mat.rows();
    std::vector<Vec> rows;
    rows.reserve(maps.size());
    for (const auto& m : maps) rows.push_back(flat(m.map.mat));
    CHECK(QMatrix::from_rows(rows).rank() == maps.size());
    (void)t;
  }
}

TEST_CASE("levi action: closed under the super-commutator") {
  const std::vector<ParabolicId> cases = {
      P(Algebra::G3, 1, {1}),  P(Algebra::G3, 3, {1}),
      P(Algebra::F4, 1, {1}),  P(Algebra::F4, 1, {4}),
      P(Algebra::F4, 3, {3}),  P(Algebra::G3, 4, {2}),
  };
  for (const auto& p : cases) {
    CAPTURE(full_case_name(p));
    auto maps = levi_action(build_full(p.diagram), p);
    const std::size_t t = maps[0].map.mat.rows();
    // Column space of the flattened maps, as a solvable system.
    std::vector<Vec> cols;
    for (const auto& m : maps) cols.push_back(flat(m.map.mat));
    QMatrix span(t * t, maps.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < t * t; ++r) span.at(r, c) = cols[c][r];
    for (std::size_t i = 0; i < maps.size(); ++i)
      for (std::size_t j = 0; j < maps.size(); ++j) {
        const QMatrix &A = maps[i].map.mat, &B = maps[j].map.mat;
        const Scalar s = sign_pow(int(maps[i].parity) * int(maps[j].parity));
        QMatrix comm = A * B + (B * A) * (-s);
        CAPTURE(maps[i].label);
        CAPTURE(maps[j].label);
        CHECK(span.solve(flat(comm)).has_value());
      }
  }
}

// ---------------------------------------------------------------------------
// 6. Regrade

TEST_CASE("regrade: matches a direct build for every crossing") {
  for (const auto& d : all_ten()) {
    auto borel = build_symbol(ParabolicId{d, all_nodes(d.alg)});
    for (const auto& p : all_parabolics(d.alg)) {
      if (p.diagram != d) continue;
      CAPTURE(full_case_name(p));
      CHECK(to_json(regrade(borel, p.crossing).alg) ==
            to_json(build_symbol(p).alg));
    }
  }
}

TEST_CASE("regrade: identity on the same crossing") {
  for (const auto& p : {P(Algebra::G3, 4, {2}), P(Algebra::F4, 2, {1, 3})}) {
    auto s = build_symbol(p);
    CHECK(to_json(regrade(s, p.crossing).alg) == to_json(s.alg));
  }
}

TEST_CASE("regrade: rejects crossings that need missing roots") {
  auto s = build_symbol(P(Algebra::G3, 1, {1}));
  CHECK_THROWS_AS((void)regrade(s, Crossing{2}), std::invalid_argument);
  CHECK_THROWS_AS((void)regrade(s, Crossing{}), std::invalid_argument);
  CHECK_THROWS_AS((void)regrade(s, Crossing{7}), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// 7. Cross-checks

TEST_CASE("cross-check: symbol vs full restriction, every parabolic") {
  for (const auto& p : every_parabolic()) {
    CAPTURE(full_case_name(p));
    auto rep = cross_check_symbol(build_full(p.diagram), build_symbol(p), p);
    CAPTURE(rep.detail);
    CHECK(rep.pass);
  }
}

TEST_CASE("cross-check: detects a zeroed structure constant") {
  const auto p = P(Algebra::G3, 4, {1, 2, 3});
  auto s = build_symbol(p);
  // Zero the diagonal bracket of the odd root delta = alpha_3: it is the
  // only pair reaching -2*delta, so the (-1,-1) bracket rank must drop.
  std::size_t di = s.alg.size();
  for (std::size_t i = 0; i < s.alg.size(); ++i)
    if (s.roots[i].m == std::vector<int>{0, 0, -1}) di = i;
  REQUIRE(di < s.alg.size());
  StructureTable table = s.alg.table();
  REQUIRE(table.erase({di, di}) == 1);
  SymbolAlgebra mutated{
      p, s.roots,
      GradedLieSuperalgebra(s.alg.basis(), std::move(table),
                            s.alg.metadata())};
  auto rep = cross_check_symbol(build_full(p.diagram), mutated, p);
  CHECK_FALSE(rep.pass);
  CHECK(rep.detail.find("(-1,-1)") != std::string::npos);
}
