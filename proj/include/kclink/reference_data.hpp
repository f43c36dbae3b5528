#pragma once

#include <string>
#include <vector>

#include "kclink/core_model.hpp"

namespace kclink::reference {

/// 100 mm steel gauge block results from two linked comparisons (deviations
/// from nominal length in nm). Three labs measured both blocks; no covariances
/// were reported. INMETRO1's 4.0 nm uncertainty is the suspect value.
std::vector<LabResult> gauge_block_labs();

/// A simulated pair of comparisons (8 A-only, 4 linking, 5 B-only labs) with
/// correlated linking results, given as x, u and r.
std::vector<LabResult> synthetic_example_labs();

}  // namespace kclink::reference
