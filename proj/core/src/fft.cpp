#include "cubiclab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace cubiclab::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, Direction dir, bool in_place) {
    const Key key{n, dir == Direction::forward ? 0 : 1, in_place};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // The planner needs scratch arrays; FFTW_ESTIMATE leaves them untouched.
    auto* a = fftw_alloc_complex(n);
    auto* b = in_place ? a : fftw_alloc_complex(n);
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (b != a) fftw_free(b);
    fftw_free(a);
    if (plan == nullptr) throw std::runtime_error("fftw: planner failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  using Key = std::tuple<std::size_t, int, bool>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out, Direction dir) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  if (in.empty()) return;
  const bool in_place = in.data() == out.data();
  fftw_plan plan = cache().get(in.size(), dir, in_place);
  // fftw_complex is layout-compatible with std::complex<double>.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace cubiclab::fft
