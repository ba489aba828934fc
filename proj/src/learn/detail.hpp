#pragma once

#include <cstddef>
#include <span>

#include "confstl/learn.hpp"

namespace confstl::learn::detail {

// training_loss restricted to data[indices[i]].
double batch_loss(const LearnerParams& params, const LabeledDataset& data, std::span<const std::size_t> indices,
                  const TemplateConfig& config, std::span<double> grad);

}  // namespace confstl::learn::detail
