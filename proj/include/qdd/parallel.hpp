#pragma once

namespace qdd {

enum class Execution { Serial, Parallel };

/// Worker count for OpenMP regions: QDD_NUM_THREADS if set and positive,
/// otherwise the OpenMP default.
int worker_count();

}  // namespace qdd
