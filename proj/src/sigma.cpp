#include "ecs/sigma.hpp"

namespace ecs {

SigmaElement SigmaElement::power(int k) const {
  SigmaElement base = k >= 0 ? *this : inverse();
  SigmaElement out = identity(static_cast<int>(c.rows()));
  for (int n = k >= 0 ? k : -k; n > 0; n >>= 1) {
    if (n & 1) out = out * base;
    base = base * base;
  }
  return out;
}

}  // namespace ecs
