#pragma once

#include <cstddef>
#include <functional>

namespace aet {

/// Worker cap used by parallel_for; defaults to 1. Results never depend on it:
/// every index writes only its own output slot.
void set_jobs(int jobs);
int jobs();

/// Runs body(i) for i in [0, count) on up to jobs() threads. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace aet
