#pragma once

#include <functional>

namespace bpc {

/// Resolves a requested thread count: positive values pass through,
/// 0 (or negative) falls back to the BPC_THREADS environment variable,
/// then to the hardware concurrency.
int resolve_thread_count(int requested);

/// Runs body(i) for i in [0, n). Work is split into contiguous index ranges;
/// callers get determinism by keying any randomness on i, never on the
/// executing thread.
void parallel_for(long long n, int threads, const std::function<void(long long)>& body);

}  // namespace bpc
