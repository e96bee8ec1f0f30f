#include "dwlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace dwlab::fft {

namespace {

// Plans are created once per (shape, sign) and then executed through the
// new-array interface, which FFTW allows from several threads at once. The
// planner itself is not reentrant, so creation happens under the mutex.
class PlanCache {
 public:
  struct Entry {
    fftw_plan plan = nullptr;
    int alignment = 0;
    Eigen::Index size = 0;
    ~Entry() {
      if (plan) fftw_destroy_plan(plan);
    }
  };

  const Entry& get(int dim, int points, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, points, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return *it->second;

    std::vector<int> shape(dim, points);
    Eigen::Index size = 1;
    for (int a = 0; a < dim; ++a) size *= points;
    auto* buffer = fftw_alloc_complex(static_cast<size_t>(size));
    auto entry = std::make_unique<Entry>();
    entry->plan = fftw_plan_dft(dim, shape.data(), buffer, buffer,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    entry->alignment = fftw_alignment_of(reinterpret_cast<double*>(buffer));
    entry->size = size;
    fftw_free(buffer);
    if (!entry->plan) throw std::runtime_error("FFTW plan creation failed");
    auto& ref = *entry;
    plans_.emplace(key, std::move(entry));
    return ref;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, std::unique_ptr<Entry>> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(const Grid& grid, Eigen::ArrayXcd& data, int sign) {
  if (data.size() != grid.size()) {
    throw std::invalid_argument("fft: data size does not match grid");
  }
  const auto& entry = cache().get(grid.dim(), grid.points(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  if (fftw_alignment_of(reinterpret_cast<double*>(data.data())) == entry.alignment) {
    fftw_execute_dft(entry.plan, ptr, ptr);
    return;
  }
  // Misaligned storage: go through an FFTW-allocated buffer.
  auto* buffer = fftw_alloc_complex(static_cast<size_t>(entry.size));
  std::memcpy(buffer, ptr, sizeof(fftw_complex) * static_cast<size_t>(entry.size));
  fftw_execute_dft(entry.plan, buffer, buffer);
  std::memcpy(ptr, buffer, sizeof(fftw_complex) * static_cast<size_t>(entry.size));
  fftw_free(buffer);
}

}  // namespace dwlab::fft
