#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <g3f4/rational.hpp>

using g3f4::Scalar;

TEST_CASE("construction is canonical") {
  CHECK(Scalar(2, 4) == Scalar(1, 2));
  CHECK(Scalar(1, -2) == Scalar(-1, 2));
  CHECK(Scalar(1, -2).den() == 2);
  CHECK(Scalar(1, -2).num() == -1);
  CHECK(Scalar(0, 7).str() == "0");
  CHECK(Scalar(0, 7).den() == 1);  // zero is 0/1
  CHECK_THROWS(Scalar(1, 0));
}

TEST_CASE("string round-trip") {
  CHECK(Scalar::from_string("3/4") == Scalar(3, 4));
  CHECK(Scalar::from_string("-6/8") == Scalar(-3, 4));
  CHECK(Scalar::from_string("5") == Scalar(5));
  CHECK(Scalar(-3, 4).str() == "-3/4");
  CHECK(Scalar(7).str() == "7");
  CHECK_THROWS(Scalar::from_string("x"));
  // Exactness: round-tripping preserves values bit-for-bit.
  Scalar a(123456789, 987654321);
  CHECK(Scalar::from_string(a.str()) == a);
}

TEST_CASE("arithmetic is exact") {
  CHECK(Scalar(1, 3) + Scalar(1, 6) == Scalar(1, 2));
  CHECK(Scalar(1, 3) - Scalar(1, 2) == Scalar(-1, 6));
  CHECK(Scalar(2, 3) * Scalar(9, 4) == Scalar(3, 2));
  CHECK(Scalar(1, 2) / Scalar(3, 2) == Scalar(1, 3));
  CHECK(-Scalar(1, 2) == Scalar(-1, 2));
  CHECK(Scalar(-5, 7).abs() == Scalar(5, 7));
  CHECK(Scalar(2, 3).inverse() == Scalar(3, 2));
  CHECK_THROWS(Scalar(1) / Scalar(0));
  CHECK_THROWS(Scalar(0).inverse());
  // No floating point anywhere: a classic fp-trap identity holds exactly.
  Scalar tenth(1, 10);
  Scalar sum;
  for (int i = 0; i < 10; ++i) sum += tenth;
  CHECK(sum == Scalar(1));
}

TEST_CASE("predicates and order") {
  CHECK(Scalar(0).is_zero());
  CHECK(Scalar(1).is_one());
  CHECK(Scalar(4, 2).is_integer());
  CHECK(!Scalar(1, 2).is_integer());
  CHECK(Scalar(-3, 7).sign() == -1);
  CHECK(Scalar(0).sign() == 0);
  CHECK(Scalar(1, 3) < Scalar(1, 2));
  CHECK(Scalar(-1, 2) < Scalar(-1, 3));
}
