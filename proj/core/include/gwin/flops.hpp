#pragma once

#include "gwin/architecture.hpp"

namespace gwin {

/// Analytic per-forward-pass FLOP count for an architecture, under fixed
/// documented rules (see flops.cpp): a multiply-add is 2 FLOPs, conv cost
/// is 2*K*K*Cin*Cout*Hout*Wout, transpose conv is counted at its input
/// resolution, dense is 2*in*out, Flipout layers run the mean and the
/// perturbation path, nonlinearities are 1 FLOP per element.
int64_t estimate_flops(const ArchitectureSpec& spec);

}  // namespace gwin
