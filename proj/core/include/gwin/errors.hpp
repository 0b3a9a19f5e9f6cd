#pragma once

#include <stdexcept>
#include <string>

namespace gwin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dataset
struct MalformedIdx : Error { using Error::Error; };
struct CountMismatch : Error { using Error::Error; };
struct AlreadyNormalized : Error { using Error::Error; };
struct WrongSize : Error { using Error::Error; };

// classifier / training
struct DivergedTraining : Error { using Error::Error; };
struct UntrainedClassifier : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

// rejection
struct OutOfRange : Error { using Error::Error; };

// gwin / evaluation
struct EmptyConfidentSubset : Error { using Error::Error; };
struct EmptyRejectedSubset : Error { using Error::Error; };

}  // namespace gwin
