#include <cmath>

#include "doctest.h"
#include "relab/errors.hpp"
#include "relab/oracles.hpp"
#include "relab/random.hpp"
#include "relab/subspace.hpp"
#include "support.hpp"

using namespace relab;
using namespace relab::testing;

TEST_CASE("span drops dependent generators") {
  const Subspace s = span_of(2, {vec({1.0, 0.0}), vec({2.0, 0.0})});
  CHECK(s.dim() == 1);
  CHECK(gap(s, span_of(2, {e(2, 0)})) < 1e-14);

  const Subspace empty = span_of(3, {});
  CHECK(empty.dim() == 0);
  CHECK(empty.ambient_dim() == 3);
  CHECK(empty.basis().cols() == 0);
}

TEST_CASE("span cuts tiny singular values") {
  const double eps = 1e-20;
  const Matrix g = (Matrix(2, 2) << 1.0, 1.0, 0.0, eps).finished();
  const Eigen::JacobiSVD<Matrix> svd(g);
  const auto sv = svd.singularValues();
  REQUIRE(sv(1) < Tolerance{}.rank_rel * sv(0));
  CHECK(span_of(2, {vec({1.0, 0.0}), vec({1.0, eps})}).dim() == 1);
}

TEST_CASE("span rejects mixed ambient dimensions") {
  CHECK_THROWS_AS(span_of(2, {vec({1.0, 0.0}), vec({1.0, 0.0, 0.0})}), DimensionMismatch);
}

TEST_CASE("complement examples") {
  CHECK(gap(complement(span_of(2, {e(2, 0)})), span_of(2, {e(2, 1)})) < 1e-14);
  CHECK(complement(Subspace(3)).is_full());
  const Subspace diag_line = span_of(2, {vec({1.0, 1.0})});
  CHECK(gap(complement(diag_line), span_of(2, {vec({1.0, -1.0})})) < 1e-14);
}

TEST_CASE("meet and join examples") {
  const Subspace x = span_of(2, {e(2, 0)});
  const Subspace y = span_of(2, {e(2, 1)});
  MeetJoin mj = meet_join(x, y);
  CHECK(mj.meet.is_zero());
  CHECK(mj.join.is_full());

  Random rng(7);
  const Subspace s = rng.subspace(4, 2);
  mj = meet_join(s, s);
  CHECK(gap(mj.meet, s) < 1e-12);
  CHECK(gap(mj.join, s) < 1e-12);

  const Subspace a = span_of(3, {e(3, 0), e(3, 1)});
  const Subspace b = span_of(3, {e(3, 1), e(3, 2)});
  mj = meet_join(a, b);
  CHECK(gap(mj.meet, span_of(3, {e(3, 1)})) < 1e-12);
  CHECK(mj.join.is_full());
  CHECK_THROWS_AS(meet(a, x), DimensionMismatch);
}

TEST_CASE("gap examples") {
  const Subspace x = span_of(2, {e(2, 0)});
  CHECK(gap(x, x) == doctest::Approx(0.0));
  CHECK(gap(x, span_of(2, {e(2, 1)})) == doctest::Approx(1.0));
  const double theta = 0.3;
  // Projectors differ by a rank-two matrix with eigenvalues +-sin(theta).
  const Subspace line = span_of(2, {vec({std::cos(theta), std::sin(theta)})});
  CHECK(gap(x, line) == doctest::Approx(std::abs(std::sin(theta))).epsilon(1e-12));
  CHECK(gap(x, Subspace::full(2)) == 1.0);
}

TEST_CASE("project examples") {
  const Vector v = vec({3.0, 4.0});
  CHECK((project(span_of(2, {e(2, 0)}), v) - vec({3.0, 0.0})).norm() < 1e-14);
  CHECK((project(Subspace::full(2), v) - v).norm() < 1e-14);
  CHECK(project(Subspace(2), v).norm() == 0.0);
  CHECK_THROWS_AS(project(Subspace(3), v), DimensionMismatch);
}

TEST_CASE("random subspace properties") {
  Random rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.uniform_int(1, 7);
    const Subspace a = rng.subspace_between(n, 0, n);
    const Subspace b = rng.subspace_between(n, 0, n);
    const Subspace c = rng.subspace_between(n, 0, n);
    CHECK(std::abs(gap(a, b) - gap(b, a)) < 1e-12);
    CHECK(gap(a, a) < 1e-12);
    CHECK(gap(a, c) <= gap(a, b) + gap(b, c) + 1e-10);
    CHECK(gap(complement(complement(a)), a) < 1e-10);
    const MeetJoin mj = meet_join(a, b);
    CHECK(mj.meet.dim() + mj.join.dim() == a.dim() + b.dim());
    const Vector v = rng.vector(n);
    const Vector p = project(a, v);
    CHECK((project(a, p) - p).norm() < 1e-10);
    CHECK((a.basis().adjoint() * (v - p)).norm() < 1e-10);
  }
}

TEST_CASE("meet agrees with the null-space route") {
  Random rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = rng.uniform_int(1, 8);
    // Force nontrivial intersections by sharing a random common part.
    const Subspace common = rng.subspace_between(n, 0, n / 2);
    const Subspace a = join(common, rng.subspace_between(n, 0, n - common.dim()));
    const Subspace b = join(common, rng.subspace_between(n, 0, n - common.dim()));
    const Subspace m1 = meet(a, b);
    const Subspace m2 = meet_by_nullspace(a, b);
    REQUIRE(m1.dim() == m2.dim());
    CHECK(gap(m1, m2) <= 1e-10);
  }
}
