#include "deform/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace deform::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planning needs scratch arrays; execution goes through the new-array
    // interface so plans can be shared by every caller and thread.
    auto* buf = fftw_alloc_complex(static_cast<size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
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

void execute(std::span<cplx> data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = cache().get(static_cast<int>(data.size()), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void forward(std::span<cplx> data) { execute(data, FFTW_FORWARD); }
void inverse(std::span<cplx> data) { execute(data, FFTW_BACKWARD); }

CVector forward_copy(std::span<const cplx> data) {
  CVector out(data.begin(), data.end());
  forward(out);
  return out;
}

CVector inverse_normalized(std::span<const cplx> spectrum) {
  CVector out(spectrum.begin(), spectrum.end());
  inverse(out);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace deform::fft
