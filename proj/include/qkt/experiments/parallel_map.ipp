#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace qkt {

template <class R>
std::vector<R> parallel_map(std::size_t n, std::size_t workers, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t k = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (k == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < k; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace qkt
