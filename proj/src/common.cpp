#include "cylev/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>

namespace cylev {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

int default_thread_count() {
  if (const char* env = std::getenv("CYLEV_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int n_threads) {
  if (n == 0) return;
  int workers = n_threads > 0 ? n_threads : default_thread_count();
  workers = static_cast<int>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

template <typename T>
T pairwise_sum_impl(std::span<const T> xs) {
  if (xs.empty()) return T(0);
  if (xs.size() <= 8) {
    T acc(0);
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum_impl(xs.first(half)) + pairwise_sum_impl(xs.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_sum_impl(xs); }
Complex pairwise_sum(std::span<const Complex> xs) { return pairwise_sum_impl(xs); }

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out;
  out.n = xs.size();
  if (out.n == 0) return out;
  out.mean = pairwise_sum(xs) / static_cast<double>(out.n);
  if (out.n == 1) return out;
  std::vector<double> sq(out.n);
  for (std::size_t i = 0; i < out.n; ++i) {
    const double d = xs[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(out.n - 1);
  out.se = std::sqrt(var / static_cast<double>(out.n));
  return out;
}

}  // namespace cylev
