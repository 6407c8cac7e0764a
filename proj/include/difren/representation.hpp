#pragma once

#include "difren/algebra.hpp"
#include "difren/operators.hpp"

namespace difren {

/// A regularized object: target = L g for r != 0, with g Fourier-safe.
struct Representation {
  DiffOperator op;
  PositionFunction seed;
  PositionFunction target;

  int dim() const { return seed.dim(); }
};

}  // namespace difren
