#include "panelbreak/rng.hpp"

#include "panelbreak/stats.hpp"

namespace panelbreak {

double SplitRng::normal() { return stats::normal_ppf(uniform()); }

}  // namespace panelbreak
