#include "perseval/metrics/gain.h"

#include <string>

#include "perseval/common/error.h"

namespace perseval::metrics {

double gain(double personalized, double baseline) {
  if (!(baseline > 0.0)) {
    throw UndefinedGainError("baseline score must be positive, got " + std::to_string(baseline));
  }
  return (personalized - baseline) / baseline * 100.0;
}

}  // namespace perseval::metrics
