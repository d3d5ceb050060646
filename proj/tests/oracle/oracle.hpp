/**
 * @file oracle.hpp
 * @brief Brute-force reference implementations for the test suites
 *
 * Nothing here includes or calls the library's algorithms; inputs are
 * plain adjacency lists and vectors so the checks stay independent.
 */

#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace gvflow::oracle {

using Adjacency = std::vector<std::vector<int>>;

/// All-pairs shortest path lengths; unreachable pairs are -1.
std::vector<std::vector<int>> floyd_warshall(const Adjacency& adjacency);

/**
 * @brief Exhaustive search for a level function in {1..n} that is gradually
 * varied and agrees with every (vertex, level) sample.
 *
 * Returns a witness or nullopt. Throws std::length_error when n^V exceeds
 * kMaxEnumeration.
 */
std::optional<std::vector<int>> enumerate_gvf_interpolants(const Adjacency& adjacency,
                                                           const std::vector<std::pair<int, int>>& samples,
                                                           int n);

inline constexpr double kMaxEnumeration = 1e8;

/**
 * @brief Solves alpha * (N - 4h) - G = 0 on the free cells by Gaussian
 * elimination with partial pivoting.
 *
 * `fixed` and `values` are row-major rows x cols; fixed cells keep their
 * value and the outer ring must be fixed. Grids up to 32x32.
 */
std::vector<double> dense_steady_solve(int rows, int cols, const std::vector<char>& fixed,
                                       const std::vector<double>& values, double alpha,
                                       const std::vector<double>& source);

/// Grid adjacency with 4-neighbors, vertex id = row * cols + col.
Adjacency grid_adjacency(int rows, int cols);

} // namespace gvflow::oracle
