#include "fracpar/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace fracpar {

namespace {

// FFTW plan creation is not thread-safe; executions via the new-array
// interface on distinct buffers are.  Plans are created once per shape and
// direction with FFTW_ESTIMATE | FFTW_UNALIGNED so they apply to any buffer.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& grid, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    Key key{grid.spatial_dims, grid.nx, grid.nt, sign};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    int rank = grid.spatial_dims + 1;
    int dims[3] = {grid.nt, grid.nx, grid.nx};  // t slowest, x fastest
    std::size_t n = grid.size();
    fftw_complex* scratch_in = fftw_alloc_complex(n);
    fftw_complex* scratch_out = fftw_alloc_complex(n);
    fftw_plan plan =
        fftw_plan_dft(rank, dims, scratch_in, scratch_out, sign,
                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch_in);
    fftw_free(scratch_out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  using Key = std::tuple<int, int, int, int>;
  std::mutex mu_;
  std::map<Key, fftw_plan> plans_;
};

void execute(const Grid& grid, int sign, const cplx* in, cplx* out) {
  fftw_plan plan = PlanCache::instance().get(grid, sign);
  // The new-array execute interface does not modify the input for c2c
  // out-of-place plans; the const_cast only adapts to the C API.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_forward(const Grid& grid, const cplx* in, cplx* out) {
  execute(grid, FFTW_FORWARD, in, out);
}

void fft_inverse(const Grid& grid, const cplx* in, cplx* out) {
  execute(grid, FFTW_BACKWARD, in, out);
  const double scale = 1.0 / static_cast<double>(grid.size());
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) out[i] *= scale;
}

std::vector<cplx> fft_forward(const Field& u) {
  std::vector<cplx> out(u.size());
  fft_forward(u.grid, u.values.data(), out.data());
  return out;
}

Field fft_inverse(const Grid& grid, const std::vector<cplx>& spectrum) {
  if (spectrum.size() != grid.size()) {
    throw InvalidArgumentError("fft_inverse: spectrum size does not match grid");
  }
  Field out(grid);
  fft_inverse(grid, spectrum.data(), out.values.data());
  return out;
}

}  // namespace fracpar
