#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace twp::detail {
namespace {

using PlanKey = std::tuple<int, int, int, int, int, int, int>;

struct PlanCache {
  std::mutex mutex;
  std::map<PlanKey, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

int fftw_sign(FftSign sign) { return sign == FftSign::forward ? FFTW_FORWARD : FFTW_BACKWARD; }

fftw_plan lookup(const PlanKey& key, int rank, const int* dims, int count, int stride, int dist,
                 int sign) {
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mutex);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;

  std::size_t span = 1;
  for (int r = 0; r < rank; ++r) span *= static_cast<std::size_t>(dims[r]);
  std::size_t extent = static_cast<std::size_t>(count - 1) * dist +
                       (span - 1) * static_cast<std::size_t>(stride) + 1;
  std::vector<std::complex<double>> scratch(extent);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_many_dft(rank, dims, count, buf, nullptr, stride, dist, buf, nullptr,
                                      stride, dist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  c.plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_many(std::complex<double>* data, int length, int count, int stride, int dist,
              FftSign sign) {
  if (length <= 1 || count <= 0) return;
  int s = fftw_sign(sign);
  PlanKey key{1, length, 0, count, stride, dist, s};
  fftw_plan plan = lookup(key, 1, &length, count, stride, dist, s);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

void fft_2d(std::complex<double>* data, int n0, int n1, FftSign sign) {
  int s = fftw_sign(sign);
  int dims[2] = {n0, n1};
  PlanKey key{2, n0, n1, 1, 1, n0 * n1, s};
  fftw_plan plan = lookup(key, 2, dims, 1, 1, n0 * n1, s);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace twp::detail
