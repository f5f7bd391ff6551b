#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corrdec/gf2.hpp"

using namespace corrdec::gf2;

namespace {

BitVec mul(const BitMatrix& a, const BitVec& x) {
  BitVec y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    bool bit = false;
    for (std::size_t c = 0; c < a.cols(); ++c) bit ^= a.get(r, c) && x.get(c);
    y.set(r, bit);
  }
  return y;
}

// Exhaustive check over all 2^cols assignments.
bool solvable_by_enumeration(const BitMatrix& a, const BitVec& b) {
  REQUIRE(a.cols() <= 20);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << a.cols()); ++mask) {
    BitVec x(a.cols());
    for (std::size_t c = 0; c < a.cols(); ++c) x.set(c, (mask >> c) & 1);
    if (mul(a, x) == b) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("identity system") {
  BitMatrix a = BitMatrix::identity(3);
  BitVec b(3);
  b.set(0, true);
  b.set(2, true);
  auto x = solve(a, b);
  REQUIRE(x.has_value());
  CHECK(*x == b);
}

TEST_CASE("underdetermined single row") {
  BitMatrix a(1, 2);
  a.set(0, 0, true);
  a.set(0, 1, true);
  BitVec b(1);
  b.set(0, true);
  auto x = solve(a, b);
  REQUIRE(x.has_value());
  CHECK(mul(a, *x) == b);
}

TEST_CASE("planted solution cross-checked by enumeration") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    BitMatrix a(5, 7);
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 7; ++c) a.set(r, c, rng() & 1);
    BitVec planted(7);
    for (std::size_t c = 0; c < 7; ++c) planted.set(c, rng() & 1);
    BitVec b = mul(a, planted);
    auto x = solve(a, b);
    REQUIRE(x.has_value());
    CHECK(mul(a, *x) == b);
    CHECK(solvable_by_enumeration(a, b));
  }
}

TEST_CASE("solve agrees with enumeration on random systems") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 8;
    BitMatrix a(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) a.set(r, c, rng() & 1);
    BitVec b(rows);
    for (std::size_t r = 0; r < rows; ++r) b.set(r, rng() & 1);
    auto x = solve(a, b);
    CHECK(x.has_value() == solvable_by_enumeration(a, b));
    if (x) CHECK(mul(a, *x) == b);
  }
}

TEST_CASE("rank basics") {
  CHECK(rank(BitMatrix::identity(4)) == 4);
  CHECK(rank(BitMatrix(3, 5)) == 0);
}

TEST_CASE("rank invariant under row permutation") {
  std::mt19937_64 rng(3);
  BitMatrix a(6, 6);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) a.set(r, c, rng() & 1);
  BitMatrix b = a;
  b.swap_rows(0, 4);
  b.swap_rows(2, 5);
  CHECK(rank(a) == rank(b));
}

TEST_CASE("kernel basis spans the null space") {
  std::mt19937_64 rng(5);
  BitMatrix a(4, 9);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 9; ++c) a.set(r, c, rng() & 1);
  auto basis = kernel_basis(a);
  CHECK(basis.size() == 9 - rank(a));
  for (const auto& v : basis) CHECK_FALSE(mul(a, v).any());
}

TEST_CASE("dimension mismatch is rejected") {
  BitMatrix a(2, 2);
  BitVec b(3);
  CHECK_THROWS_AS(solve(a, b), std::invalid_argument);
}
