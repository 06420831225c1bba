#pragma once

#include <vector>

#include "logitdef/tensor.hpp"

namespace logitdef {

// An image with values in [0,1] and its class label in [0, C).
struct LabeledExample {
  Tensor image;
  int label = 0;
};

using Dataset = std::vector<LabeledExample>;

// Pixel range and shape consistency, enforced on ingestion.
void validate_dataset(const Dataset& dataset, int class_count);

}  // namespace logitdef
