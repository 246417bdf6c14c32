#pragma once

#include <cstddef>
#include <functional>

namespace sbt {

// Worker cap for parallel_for; 0 means std::thread::hardware_concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, count). Each index writes its own slot, so the
// result does not depend on scheduling. Calls made from inside a worker run
// inline. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sbt
