#include "gwin/flops.hpp"

namespace gwin {

// Counting rules, fixed for comparability:
//   conv:            2*K*K*Cin*Cout*Hout*Wout + bias Cout*Hout*Wout
//   transpose conv:  2*K*K*Cin*Cout*Hin*Win  + bias Cout*Hout*Wout
//   dense:           2*in*out + out
//   flipout layers:  2x the core cost (mean + perturbation path) plus the
//                    elementwise extras: input/output sign flips, the
//                    sigma*eps weight product, and bias sampling
//   max pool:        K*K comparisons per output element
//   nonlinearity:    1 FLOP per element
int64_t estimate_flops(const ArchitectureSpec& spec) {
  const auto shapes = output_shapes(spec);
  int64_t total = 0;
  Shape in = spec.input;
  for (size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& l = spec.layers[i];
    const Shape out = shapes[i];
    const int64_t in_elems =
        in[1] == 0 ? in[0] : in[0] * in[1] * in[2];
    const int64_t out_elems =
        out[1] == 0 ? out[0] : out[0] * out[1] * out[2];
    switch (l.kind) {
      case LayerKind::Conv2d: {
        total += 2 * l.kernel * l.kernel * in[0] * out[0] * out[1] * out[2];
        if (l.bias) total += out_elems;
        break;
      }
      case LayerKind::FlipoutConv2d: {
        const int64_t core =
            2 * l.kernel * l.kernel * in[0] * out[0] * out[1] * out[2];
        total += 2 * core;
        total += in_elems + out_elems;                    // sign flips
        total += l.kernel * l.kernel * in[0] * out[0];    // sigma*eps
        total += 2 * out[0];                              // bias sample
        total += out_elems;                               // bias add
        break;
      }
      case LayerKind::ConvTranspose2d: {
        total += 2 * l.kernel * l.kernel * in[0] * out[0] * in[1] * in[2];
        if (l.bias) total += out_elems;
        break;
      }
      case LayerKind::Dense: {
        total += 2 * in_elems * out[0];
        if (l.bias) total += out[0];
        break;
      }
      case LayerKind::FlipoutDense: {
        total += 2 * (2 * in_elems * out[0]);
        total += in_elems + out[0];        // sign flips
        total += in_elems * out[0];        // sigma*eps
        total += 2 * out[0] + out[0];      // bias sample + add
        break;
      }
      case LayerKind::MaxPool2d:
        total += l.kernel * l.kernel * out_elems;
        break;
      case LayerKind::Flatten:
      case LayerKind::Reshape:
      case LayerKind::Crop2d:
      case LayerKind::LabelConcat:
        break;
    }
    if (l.act != Activation::None) total += out_elems;
    in = out;
  }
  return total;
}

}  // namespace gwin
