#include "commsense/dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace commsense {

namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex, FftwFree>;

FftwBuffer make_buffer(std::size_t n) {
  return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// Planner calls are not thread-safe in FFTW; execution of an existing plan
// on fresh aligned buffers is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto in = make_buffer(n);
    auto out = make_buffer(n);
    fftw_plan plan = fftw_plan_dft_1d(n, in.get(), out.get(), sign, FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<cplx> transform(std::span<const cplx> input, int sign) {
  const auto n = input.size();
  if (n == 0) return {};
  auto in = make_buffer(n);
  auto out = make_buffer(n);
  static_assert(sizeof(cplx) == sizeof(fftw_complex));
  std::memcpy(in.get(), input.data(), n * sizeof(cplx));
  fftw_execute_dft(cache().get(static_cast<int>(n), sign), in.get(), out.get());

  std::vector<cplx> result(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    result[i] = cplx(out.get()[i][0], out.get()[i][1]) * scale;
  }
  return result;
}

}  // namespace

std::vector<cplx> dft_forward(std::span<const cplx> input) {
  return transform(input, FFTW_FORWARD);
}

std::vector<cplx> dft_inverse(std::span<const cplx> input) {
  return transform(input, FFTW_BACKWARD);
}

}  // namespace commsense
