#include "blgp/band.hpp"

#include "blgp/error.hpp"

#include <cmath>
#include <string>

namespace blgp {

Band::Band(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || !(b > a)) {
    throw ValidationError("band: need finite 0 <= a < b, got [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
}

}  // namespace blgp
