#include <surfcr/parallel.hpp>

#include <algorithm>
#include <atomic>

namespace surfcr
{

namespace
{
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads = std::max(1, n); }

int num_threads() { return g_threads; }

double pairwise_sum(std::span<const double> values)
{
  if (values.size() <= 8)
  {
    double s = 0.0;
    for (double v : values)
      s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace surfcr
