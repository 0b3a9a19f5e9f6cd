#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gwin {

enum class LayerKind {
  FlipoutConv2d,
  Conv2d,
  ConvTranspose2d,
  MaxPool2d,
  Flatten,
  Reshape,
  FlipoutDense,
  Dense,
  Crop2d,
  LabelConcat,  // depth-wise one-hot label planes (+10 channels)
};

enum class Activation { None, ReLU, LeakyReLU, Sigmoid };

struct LayerSpec {
  LayerKind kind;
  int64_t kernel = 0;
  int64_t stride = 1;
  int64_t padding = 0;
  int64_t filters = 0;  // conv out-channels / dense units
  Activation act = Activation::None;
  bool bias = true;
  double dropout = 0.0;                    // applied after the layer when > 0
  std::array<int64_t, 3> target{0, 0, 0};  // Reshape/Crop2d target (C,H,W)
};

/// Shape of a layer output: (C,H,W) for feature maps, (len,0,0) for vectors.
using Shape = std::array<int64_t, 3>;

struct ArchitectureSpec {
  std::string name;
  Shape input{1, 28, 28};
  std::vector<LayerSpec> layers;

  bool vector_input() const { return input[1] == 0; }
};

/// Output shape after each layer, for table checks and FLOP accounting.
std::vector<Shape> output_shapes(const ArchitectureSpec& spec);

// The two classifier baselines and the generator/critic pair.
ArchitectureSpec lenet5_bnn_spec();
ArchitectureSpec improved_bnn_spec();
ArchitectureSpec critic_spec();
ArchitectureSpec generator_spec(int64_t noise_dim = 100);

ArchitectureSpec spec_by_name(const std::string& name);

}  // namespace gwin
