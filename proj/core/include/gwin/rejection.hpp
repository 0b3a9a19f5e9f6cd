#pragma once

#include <cstdint>

#include "gwin/errors.hpp"

namespace gwin {

/// Threshold rule: accept the predicted label when certainty >= tau,
/// otherwise reject. tau=0 accepts everything; tau=1 accepts only c==1.
struct RejectionDecision {
  bool accepted;
  int64_t label = -1;  // valid only when accepted
  double certainty;
  double threshold;
};

inline RejectionDecision reject(double c, int64_t y_prime, double tau) {
  if (c < 0.0 || c > 1.0) throw OutOfRange("certainty outside [0,1]");
  if (tau < 0.0 || tau > 1.0) throw OutOfRange("tau outside [0,1]");
  if (c >= tau) return {true, y_prime, c, tau};
  return {false, -1, c, tau};
}

}  // namespace gwin
