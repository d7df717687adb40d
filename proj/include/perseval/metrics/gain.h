#pragma once

namespace perseval::metrics {

// Relative improvement in percent: (personalized - baseline) / baseline * 100.
// Throws UndefinedGainError when baseline <= 0.
double gain(double personalized, double baseline);

}  // namespace perseval::metrics
