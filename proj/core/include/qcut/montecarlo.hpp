// Copyright 2026 The qcut authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qcut/rng.hpp"

namespace qcut {

struct TrialStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error = 0.0;
  std::size_t trials = 0;
};

// Trials run in fixed-size chunks, one RNG stream per chunk derived from
// (base_seed, chunk index), partial sums combined in chunk order. The result
// is therefore byte-identical for any thread count.
inline constexpr std::size_t kTrialChunk = 4096;

template <typename Fn>
TrialStats run_chunked_trials(std::size_t trials, std::size_t threads, std::uint64_t base_seed,
                              Fn per_trial) {
  if (trials == 0) throw std::invalid_argument("trial count must be positive");
  const std::size_t nchunks = (trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<double> sums(nchunks, 0.0), sumsqs(nchunks, 0.0);

  auto run_chunk = [&](std::size_t c) {
    RngStream rng(base_seed, c);
    const std::size_t begin = c * kTrialChunk;
    const std::size_t end = std::min(trials, begin + kTrialChunk);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = per_trial(i, rng);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    sumsqs[c] = s2;
  };

  if (threads <= 1 || nchunks == 1) {
    for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
  } else {
    const std::size_t nthreads = std::min(threads, nchunks);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c = t; c < nchunks; c += nthreads) run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  double total = 0.0, total_sq = 0.0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    total += sums[c];
    total_sq += sumsqs[c];
  }
  TrialStats st;
  st.trials = trials;
  st.mean = total / double(trials);
  st.variance =
      trials > 1 ? std::max(0.0, (total_sq - double(trials) * st.mean * st.mean) /
                                     double(trials - 1))
                 : 0.0;
  st.std_error = std::sqrt(st.variance / double(trials));
  return st;
}

}  // namespace qcut
