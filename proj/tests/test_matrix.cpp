#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <g3f4/matrix.hpp>

using g3f4::QMatrix;
using g3f4::Scalar;
using g3f4::Vec;

namespace {
QMatrix mat(const std::vector<std::vector<long>>& rows) {
  std::vector<Vec> v;
  for (const auto& r : rows) {
    Vec row;
    for (long x : r) row.push_back(Scalar(x));
    v.push_back(row);
  }
  return QMatrix::from_rows(v);
}
}  // namespace

TEST_CASE("rref oracles") {
  // Identity 3x3 -> itself, pivots [0,1,2].
  auto r1 = QMatrix::identity(3).rref();
  CHECK(r1.mat == QMatrix::identity(3));
  CHECK(r1.pivots == std::vector<std::size_t>{0, 1, 2});

  // Zero 2x4 -> zero, no pivots.
  auto r2 = QMatrix(2, 4).rref();
  CHECK(r2.mat == QMatrix(2, 4));
  CHECK(r2.pivots.empty());

  // [[2,4],[1,2]] -> [[1,2],[0,0]], pivots [0].
  auto r3 = mat({{2, 4}, {1, 2}}).rref();
  CHECK(r3.mat == mat({{1, 2}, {0, 0}}));
  CHECK(r3.pivots == std::vector<std::size_t>{1 - 1});

  // rref is idempotent.
  auto m = mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  auto once = m.rref();
  auto twice = once.mat.rref();
  CHECK(once.mat == twice.mat);
  CHECK(once.pivots == twice.pivots);
  CHECK(m.rank() == 2);
}

TEST_CASE("nullspace oracles and canonical form") {
  CHECK(QMatrix::identity(4).nullspace().empty());
  CHECK(QMatrix(2, 3).nullspace().size() == 3);

  // [[1,1,0]]: free columns 1 and 2, canonical basis (-1,1,0), (0,0,1).
  auto ns = mat({{1, 1, 0}}).nullspace();
  REQUIRE(ns.size() == 2);
  CHECK(ns[0] == Vec{Scalar(-1), Scalar(1), Scalar(0)});
  CHECK(ns[1] == Vec{Scalar(0), Scalar(0), Scalar(1)});

  // Every basis vector is in the kernel; rank-nullity holds.
  auto m = mat({{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 1, 0}});
  auto basis = m.nullspace();
  CHECK(m.rank() + basis.size() == m.cols());
  for (const auto& v : basis) CHECK(g3f4::vec_is_zero(m.apply(v)));
}

TEST_CASE("solve oracles") {
  Vec b{Scalar(3), Scalar(-1)};
  auto x1 = QMatrix::identity(2).solve(b);
  REQUIRE(x1.has_value());
  CHECK(*x1 == b);

  CHECK(!QMatrix(2, 2).solve(b).has_value());  // zero matrix, b != 0

  auto x2 = mat({{2}}).solve(Vec{Scalar(3)});
  REQUIRE(x2.has_value());
  CHECK((*x2)[0] == Scalar(3, 2));

  // Consistent underdetermined system: particular solution has free vars 0.
  auto m = mat({{1, 1, 0}, {0, 0, 1}});
  auto x3 = m.solve(Vec{Scalar(5), Scalar(7)});
  REQUIRE(x3.has_value());
  CHECK(m.apply(*x3) == Vec{Scalar(5), Scalar(7)});
  CHECK((*x3)[1] == Scalar(0));

  // Inconsistent system detected exactly.
  CHECK(!mat({{1, 1}, {2, 2}}).solve(Vec{Scalar(1), Scalar(3)}).has_value());
}

TEST_CASE("product, transpose, apply") {
  auto a = mat({{1, 2}, {3, 4}});
  auto b = mat({{0, 1}, {1, 0}});
  CHECK(a * b == mat({{2, 1}, {4, 3}}));
  CHECK(a.transpose() == mat({{1, 3}, {2, 4}}));
  CHECK(a.apply(Vec{Scalar(1), Scalar(1)}) == Vec{Scalar(3), Scalar(7)});
  CHECK((a - a).is_zero());
  CHECK(a * Scalar(1, 2) == mat({{1, 1}, {3, 2}}) * Scalar(1) - mat({{1, 0}, {3, 0}}) * Scalar(1, 2));
}

TEST_CASE("rational pivots stay exact") {
  // A matrix engineered to produce intermediate fractions.
  auto m = mat({{3, 1, 2}, {1, 3, 2}, {2, 2, 5}});
  auto r = m.rref();
  CHECK(r.mat == QMatrix::identity(3));
  auto x = m.solve(Vec{Scalar(6), Scalar(6), Scalar(9)});
  REQUIRE(x.has_value());
  CHECK(m.apply(*x) == Vec{Scalar(6), Scalar(6), Scalar(9)});
}
