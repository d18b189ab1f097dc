#ifndef CE_PARALLEL_HPP_
#define CE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace ce {

/// Number of worker threads for evaluation fan-out: CE_SIAMESE_THREADS when
/// set (minimum 1), hardware concurrency otherwise.
std::size_t evaluation_thread_count();

/// Runs fn(0..count-1) across the evaluation workers. fn must be safe to call
/// concurrently for distinct indices; results keyed by index stay
/// deterministic regardless of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ce

#endif  // CE_PARALLEL_HPP_
