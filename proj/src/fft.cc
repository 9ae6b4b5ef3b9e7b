#include "chronosqueeze/fft.h"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct Buffers {
  explicit Buffers(std::size_t n)
      : in(fftw_alloc_real(n)), out(fftw_alloc_complex(n / 2 + 1)) {}
  ~Buffers() {
    fftw_free(in);
    fftw_free(out);
  }
  Buffers(const Buffers&) = delete;
  Buffers& operator=(const Buffers&) = delete;
  double* in;
  fftw_complex* out;
};

std::mutex planner_mutex;

// FFTW_ESTIMATE keeps the chosen algorithm, and therefore the rounding,
// identical from run to run.
fftw_plan plan_for(std::size_t n) {
  static std::map<std::size_t, Plan> plans;
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second.get();
  Buffers scratch(n);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), scratch.in, scratch.out,
                                        FFTW_ESTIMATE);
  if (!plan) throw Error("FFTW could not create a plan of size " + std::to_string(n));
  plans.emplace(n, Plan(plan));
  return plan;
}

}  // namespace

void real_fft(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (n < 2 || out.size() < n / 2 + 1) {
    throw InvalidArgumentError("real_fft: output must hold n/2 + 1 bins");
  }
  fftw_plan plan = plan_for(n);
  thread_local std::map<std::size_t, std::unique_ptr<Buffers>> local;
  auto& buffers = local[n];
  if (!buffers) buffers = std::make_unique<Buffers>(n);
  std::copy(in.begin(), in.end(), buffers->in);
  fftw_execute_dft_r2c(plan, buffers->in, buffers->out);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    out[k] = {buffers->out[k][0], buffers->out[k][1]};
  }
}

}  // namespace chronosqueeze
