#pragma once

namespace crowdctl {

/// Selects the serial reference kernels or their OpenMP counterparts.
/// Both produce bit-identical results.
enum class Exec { serial, parallel };

} // namespace crowdctl
