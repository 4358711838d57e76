#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace nonloc::detail {
namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Grid& grid, int sign) {
    std::vector<int> dims;
    for (int a = 0; a < grid.dim(); ++a) dims.push_back(static_cast<int>(grid.points(a)));
    Key key{dims, sign};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(grid.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims.data(), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  using Key = std::pair<std::vector<int>, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(const Grid& grid, std::vector<std::complex<double>>& data, int sign) {
  auto plan = cache().get(grid, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft_forward(const Grid& grid, std::vector<std::complex<double>>& data) {
  run(grid, data, FFTW_FORWARD);
}

void fft_backward(const Grid& grid, std::vector<std::complex<double>>& data) {
  run(grid, data, FFTW_BACKWARD);
}

}  // namespace nonloc::detail
