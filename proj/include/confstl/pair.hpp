#pragma once

#include "confstl/trace.hpp"

namespace confstl {

/// A (train, validation) dataset pair drawn from one task.
struct CalibrationPair {
  LabeledDataset train;
  LabeledDataset valid;
  int task_id = -1;
};

}  // namespace confstl
