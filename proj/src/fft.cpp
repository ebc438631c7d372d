#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace wck::fft {

namespace {

// FFTW's planner is not thread-safe; execution of a finished plan is.
std::mutex planner_mu;

fftw_plan get_plan(int N, int axis, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lk(planner_mu);
  auto key = std::make_tuple(N, axis, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_complex* buf = fftw_alloc_complex(std::size_t(N) * N);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int dir = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan p;
  if (axis < 0) {
    p = fftw_plan_dft_2d(N, N, buf, buf, dir, flags);
  } else {
    int n[1] = {N};
    int stride = axis == 1 ? 1 : N;
    int dist = axis == 1 ? N : 1;
    p = fftw_plan_many_dft(1, n, N, buf, nullptr, stride, dist, buf, nullptr,
                           stride, dist, dir, flags);
  }
  fftw_free(buf);
  cache.emplace(key, p);
  return p;
}

}  // namespace

void transform2(std::complex<double>* data, int N, int sign) {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(get_plan(N, -1, sign), d, d);
}

void transform_axis(std::complex<double>* data, int N, int axis, int sign) {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(get_plan(N, axis, sign), d, d);
}

}  // namespace wck::fft
