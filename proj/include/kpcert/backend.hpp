#pragma once

namespace kpcert {

/// Which kernel implementation a call dispatches to. `reference` is the
/// serial implementation the OpenMP kernels are tested against; both produce
/// bit-identical results.
enum class Backend { parallel, reference };

}  // namespace kpcert
