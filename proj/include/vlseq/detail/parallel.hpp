#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace vlseq::detail {

/// results[i] = task(i) for i in [0, count), evaluated on a few worker threads.
/// The result order does not depend on scheduling.
template <class Task>
auto parallel_map(std::size_t count, Task&& task) -> std::vector<decltype(task(std::size_t{}))> {
  using Result = decltype(task(std::size_t{}));
  std::vector<Result> results(count);
  const std::size_t workers =
      std::min<std::size_t>(count, std::max<std::size_t>(1, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = task(i);
    return results;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) results[i] = task(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return results;
}

}  // namespace vlseq::detail
