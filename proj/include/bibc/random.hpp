// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace bibc {

using Engine = std::mt19937_64;

/// Independent stream for item `index` of a run seeded with `master`.
/// The same (master, index) always yields the same stream, so per-item work
/// can be scheduled on any number of threads.
Engine make_stream(std::uint64_t master, std::uint64_t index);

/// Child seed for a sub-task; a cheap way to hand one number to a callee
/// that itself takes a seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Runs body(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). Items are claimed dynamically; callers write results into
/// per-index slots and reduce afterwards in index order.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

unsigned resolve_workers(unsigned workers);

}  // namespace bibc
