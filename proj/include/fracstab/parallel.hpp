#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace fracstab {

/// Worker count: the explicit value if given, else FRACSTAB_JOBS, else the
/// hardware concurrency (at least 1).
unsigned resolve_jobs(std::optional<unsigned> requested);

/// Calls body(i) for i in [0, n) on up to `jobs` threads. Without exceptions
/// every index runs exactly once; otherwise the remaining indices are skipped
/// and the first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace fracstab
