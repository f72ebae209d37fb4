#include "hardysob/core.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace hs {

std::string format_point(const CVec& z) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (j) os << ", ";
    os << z(j).real() << (z(j).imag() < 0 ? "-" : "+") << std::abs(z(j).imag()) << "i";
  }
  os << ")";
  return os.str();
}

bool all_finite(const CVec& z) {
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if (!std::isfinite(z(j).real()) || !std::isfinite(z(j).imag())) return false;
  return true;
}

unsigned thread_count() {
  if (const char* env = std::getenv("HARDYSOB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hs
