#pragma once

#include <string_view>

namespace frd {

// Second-order kernels with compact support [-1, 1]: symmetric, bounded,
// strictly positive on (-1, 1). Unbounded-support kernels are rejected at
// name resolution.
enum class KernelKind { Triangular, Uniform, Epanechnikov };

// K(u). Triangular: 1-|u|; uniform: 1/2 on the closed support; Epanechnikov:
// (3/4)(1-u^2). Zero outside [-1, 1].
double kernel_eval(KernelKind kind, double u);

// K((x - x0)/h) for bandwidth h > 0.
double kernel_eval_scaled(KernelKind kind, double x, double x0, double h);

// sup_u K(u)
double kernel_max(KernelKind kind);

// Case-insensitive lookup: "triangular", "uniform", "epanechnikov".
KernelKind kernel_from_name(std::string_view name);
const char* kernel_name(KernelKind kind);

}  // namespace frd
