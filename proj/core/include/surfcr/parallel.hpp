#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace surfcr
{

/// Number of worker threads used by the face- and edge-parallel loops.
/// Defaults to 1; results never depend on this value.
void set_num_threads(int n);
int num_threads();

/// Calls body(i) for every i in [0, n), statically chunked over
/// num_threads() threads. The first exception (lowest chunk) is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body)
{
  const std::size_t nt
      = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), n);
  if (nt <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }

  std::vector<std::exception_ptr> errors(nt);
  std::vector<std::thread> workers;
  workers.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t)
  {
    const std::size_t begin = n * t / nt;
    const std::size_t end = n * (t + 1) / nt;
    workers.emplace_back(
        [&, t, begin, end]()
        {
          try
          {
            for (std::size_t i = begin; i < end; ++i)
              body(i);
          }
          catch (...)
          {
            errors[t] = std::current_exception();
          }
        });
  }
  for (auto& w : workers)
    w.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

/// Pairwise (tree) summation in a fixed order.
double pairwise_sum(std::span<const double> values);

} // namespace surfcr
