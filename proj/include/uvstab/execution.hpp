#pragma once

namespace uvstab {

/// Parameter scans run either on the calling thread or across an OpenMP
/// team. Both produce identical, input-ordered results.
enum class Execution { serial, parallel };

/// Thread count for parallel scans: UVSTAB_THREADS when set to a positive
/// integer, otherwise the OpenMP default.
int scan_threads();

}  // namespace uvstab
