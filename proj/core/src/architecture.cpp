#include "gwin/architecture.hpp"

#include <stdexcept>

namespace gwin {

namespace {

int64_t conv_out(int64_t in, int64_t k, int64_t s, int64_t p) {
  return (in + 2 * p - k) / s + 1;
}

}  // namespace

std::vector<Shape> output_shapes(const ArchitectureSpec& spec) {
  std::vector<Shape> out;
  Shape cur = spec.input;
  for (const auto& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::FlipoutConv2d:
      case LayerKind::Conv2d:
        cur = {l.filters, conv_out(cur[1], l.kernel, l.stride, l.padding),
               conv_out(cur[2], l.kernel, l.stride, l.padding)};
        break;
      case LayerKind::ConvTranspose2d:
        // stride-2 "same" upsampling: out = in * stride
        cur = {l.filters, cur[1] * l.stride, cur[2] * l.stride};
        break;
      case LayerKind::MaxPool2d:
        cur = {cur[0], (cur[1] + l.stride - 1) / l.stride,
               (cur[2] + l.stride - 1) / l.stride};
        break;
      case LayerKind::Flatten:
        cur = {cur[0] * std::max<int64_t>(cur[1], 1) *
                   std::max<int64_t>(cur[2], 1),
               0, 0};
        break;
      case LayerKind::Reshape:
      case LayerKind::Crop2d:
        cur = l.target;
        break;
      case LayerKind::FlipoutDense:
      case LayerKind::Dense:
        cur = {l.filters, 0, 0};
        break;
      case LayerKind::LabelConcat:
        cur = {cur[0] + 10, cur[1], cur[2]};
        break;
    }
    out.push_back(cur);
  }
  return out;
}

ArchitectureSpec lenet5_bnn_spec() {
  ArchitectureSpec s;
  s.name = "lenet5_bnn";
  s.input = {1, 28, 28};
  s.layers = {
      {.kind = LayerKind::FlipoutConv2d, .kernel = 5, .stride = 1, .padding = 2, .filters = 6, .act = Activation::ReLU},
      {.kind = LayerKind::MaxPool2d, .kernel = 2, .stride = 2},
      {.kind = LayerKind::FlipoutConv2d, .kernel = 5, .stride = 1, .padding = 2, .filters = 16, .act = Activation::ReLU},
      {.kind = LayerKind::MaxPool2d, .kernel = 2, .stride = 2},
      {.kind = LayerKind::FlipoutConv2d, .kernel = 5, .stride = 1, .padding = 2, .filters = 120, .act = Activation::ReLU},
      {.kind = LayerKind::Flatten},
      {.kind = LayerKind::FlipoutDense, .filters = 84, .act = Activation::ReLU},
      {.kind = LayerKind::FlipoutDense, .filters = 10},
  };
  return s;
}

ArchitectureSpec improved_bnn_spec() {
  ArchitectureSpec s;
  s.name = "improved_bnn";
  s.input = {1, 28, 28};
  s.layers = {
      {.kind = LayerKind::FlipoutConv2d, .kernel = 3, .stride = 1, .padding = 0, .filters = 32, .act = Activation::ReLU},
      {.kind = LayerKind::FlipoutConv2d, .kernel = 3, .stride = 1, .padding = 0, .filters = 32, .act = Activation::ReLU},
      {.kind = LayerKind::FlipoutConv2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 32, .act = Activation::ReLU, .dropout = 0.4},
      {.kind = LayerKind::FlipoutConv2d, .kernel = 3, .stride = 1, .padding = 0, .filters = 64, .act = Activation::ReLU},
      {.kind = LayerKind::FlipoutConv2d, .kernel = 3, .stride = 1, .padding = 0, .filters = 64, .act = Activation::ReLU},
      {.kind = LayerKind::FlipoutConv2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 64, .act = Activation::ReLU, .dropout = 0.4},
      {.kind = LayerKind::Flatten},
      {.kind = LayerKind::FlipoutDense, .filters = 128, .act = Activation::ReLU, .dropout = 0.4},
      {.kind = LayerKind::FlipoutDense, .filters = 10},
  };
  return s;
}

ArchitectureSpec critic_spec() {
  ArchitectureSpec s;
  s.name = "critic";
  s.input = {1, 28, 28};
  s.layers = {
      {.kind = LayerKind::LabelConcat},
      {.kind = LayerKind::Conv2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 64, .act = Activation::LeakyReLU},
      {.kind = LayerKind::LabelConcat},
      {.kind = LayerKind::Conv2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 128, .act = Activation::LeakyReLU},
      {.kind = LayerKind::LabelConcat},
      {.kind = LayerKind::Conv2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 256, .act = Activation::LeakyReLU},
      {.kind = LayerKind::LabelConcat},
      {.kind = LayerKind::Flatten},
      {.kind = LayerKind::Dense, .filters = 1},
  };
  return s;
}

ArchitectureSpec generator_spec(int64_t noise_dim) {
  ArchitectureSpec s;
  s.name = "generator";
  s.input = {28 * 28 + noise_dim, 0, 0};  // flattened image ++ noise
  s.layers = {
      {.kind = LayerKind::Dense, .filters = 4096, .act = Activation::ReLU},
      {.kind = LayerKind::Reshape, .target = {256, 4, 4}},
      {.kind = LayerKind::ConvTranspose2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 128, .act = Activation::ReLU},
      {.kind = LayerKind::Crop2d, .target = {128, 7, 7}},
      {.kind = LayerKind::ConvTranspose2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 64, .act = Activation::ReLU},
      {.kind = LayerKind::ConvTranspose2d, .kernel = 5, .stride = 2, .padding = 2, .filters = 1, .act = Activation::Sigmoid},
  };
  return s;
}

ArchitectureSpec spec_by_name(const std::string& name) {
  if (name == "lenet5_bnn") return lenet5_bnn_spec();
  if (name == "improved_bnn") return improved_bnn_spec();
  if (name == "critic") return critic_spec();
  if (name == "generator") return generator_spec();
  throw std::invalid_argument("unknown architecture: " + name);
}

}  // namespace gwin
