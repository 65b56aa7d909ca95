#pragma once

#include <cstdint>
#include <random>

#include "relab/relation.hpp"

namespace relab {

// Seeded generators for test ensembles and `relab gen`. Results depend only on the seed.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  Index uniform_int(Index lo, Index hi);  // inclusive
  bool coin(double p = 0.5);

  Matrix matrix(Index rows, Index cols);
  Vector vector(Index n) { return matrix(n, 1).col(0); }
  Matrix hermitian(Index n, double scale = 1.0);
  Subspace subspace(Index n, Index d);
  // Subspace of random dimension in [lo, hi].
  Subspace subspace_between(Index n, Index lo, Index hi);
  // Relation C^p -> C^q whose graph has random dimension in [0, p + q].
  Relation relation(Index p, Index q);
  // Everywhere-defined operator C^p -> C^q.
  Relation operator_relation(Index p, Index q);
  // Maximal sectorial relation on C^n; `real` makes it selfadjoint (B = 0).
  Relation maximal_sectorial(Index n, bool real = false);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace relab
