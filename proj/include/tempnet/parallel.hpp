#pragma once

#include <exception>
#include <utility>
#include <vector>

namespace tempnet {

/// Runs f(i) for i in [0, n) across OpenMP threads. Work items write only
/// their own slots, so results are identical for any thread count. Exceptions
/// are captured per index and the lowest-index one is rethrown afterwards.
template <typename F>
void parallel_for_indexed(int n, F&& f) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace tempnet
