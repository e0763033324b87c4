#pragma once

#include <stdexcept>

namespace topocausal {

// Input that cannot be turned into a valid dataset, network or ground truth.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Valid input for which an algorithm has no answer (e.g. no connected threshold).
class AlgorithmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topocausal
