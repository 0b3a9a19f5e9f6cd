#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <string>

#include "gwin/errors.hpp"

namespace gwin {

/// A set of 28x28x1 grayscale images with integer labels 0-9.
/// Images are stored NCHW as float32. Raw sets (straight from IDX) hold
/// values in [0,255]; normalized sets hold values in [0,1].
struct LabeledImageSet {
  torch::Tensor images;  // (N, 1, H, W) float32
  torch::Tensor labels;  // (N,) int64
  std::string name;

  int64_t size() const { return images.size(0); }
};

struct DatasetSplit {
  LabeledImageSet train;       // 50,000
  LabeledImageSet validation;  // 10,000
  uint64_t split_seed = 0;
};

// IDX magic numbers (big-endian on disk).
inline constexpr uint32_t kIdxImageMagic = 0x00000803;
inline constexpr uint32_t kIdxLabelMagic = 0x00000801;

/// Reads an IDX image/label file pair. Pixels come back as raw reals in
/// [0,255]; call normalize() before feeding models.
/// Throws MalformedIdx on bad magic / truncation / dimension trouble and
/// CountMismatch when the two files disagree on N.
LabeledImageSet load_idx(const std::filesystem::path& images_path,
                         const std::filesystem::path& labels_path,
                         const std::string& name = "");

/// Images-only variant for unlabeled inference input; labels come back as
/// zeros.
LabeledImageSet load_idx_images(const std::filesystem::path& images_path,
                                const std::string& name = "");

/// Writes the set back out as an IDX pair, bit-exact round trip with
/// load_idx. Normalized sets are rescaled to bytes (values snap exactly
/// since the 8-bit grid is representable in float).
void save_idx(const LabeledImageSet& set,
              const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path);

/// Divides every pixel by 255. Refuses sets that already look normalized
/// (max pixel <= 1) so a double application can't silently corrupt data.
LabeledImageSet normalize(const LabeledImageSet& raw);

/// Deterministic seeded 50k/10k partition of the 60k training set.
/// Throws WrongSize unless N == 60,000.
DatasetSplit split_train_val(const LabeledImageSet& full, uint64_t seed);

/// Selects rows by index (copying). Used for subset views everywhere.
LabeledImageSet take(const LabeledImageSet& set, const torch::Tensor& indices);

}  // namespace gwin
