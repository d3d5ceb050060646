/**
 * @file parallel.hpp
 * @brief Row-block fan-out used by the Jacobi-style sweeps
 *
 * Every caller reads only from an immutable previous iterate and writes
 * disjoint rows, so results do not depend on the worker count.
 */

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace gvflow::detail {

/// Calls fn(row_begin, row_end) over contiguous blocks covering [0, rows).
template <class Fn>
void for_row_blocks(int rows, int workers, Fn&& fn) {
    const int n = std::clamp(workers, 1, std::max(rows, 1));
    if (n == 1) {
        fn(0, rows);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    const int chunk = rows / n;
    const int extra = rows % n;
    int begin = 0;
    for (int w = 0; w < n; ++w) {
        const int end = begin + chunk + (w < extra ? 1 : 0);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
        begin = end;
    }
}

} // namespace gvflow::detail
