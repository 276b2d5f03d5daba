// Compares the serial reference path (threads = 1) against the OpenMP block
// evaluation (threads = 0, library default) on a representative workload and
// checks that both produce bitwise-identical results, which the fixed
// l-ascending pairwise reduction guarantees.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "casimir/lifshitz.hpp"

using namespace casimir;

namespace {

lifshitz::BodyMaterial gold() {
  lifshitz::BodyMaterial b;
  b.model.drude = materials::DrudeTerm{9.1, 0.06};
  b.model.modified = materials::ModifiedOscillatorTerm{6.5, 5.9, 1.42};
  b.label = "au";
  return b;
}

double time_sweep(int threads, double temperature_k, double* checksum) {
  lifshitz::BodyMaterial au = gold();
  lifshitz::MatsubaraGrid grid{temperature_k};
  lifshitz::SolverOptions opts;
  opts.threads = threads;
  auto t0 = std::chrono::steady_clock::now();
  double sum = 0.0;
  for (double a = 150.0; a <= 750.0; a += 60.0) {
    lifshitz::Geometry g{1e5, a};
    sum += lifshitz::force_sphere_plate(g, au, au, grid, opts).value;
    sum += lifshitz::gradient_sphere_plate(g, au, au, grid, opts).value;
  }
  auto t1 = std::chrono::steady_clock::now();
  *checksum = sum;
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  double temperature = argc > 2 ? std::atof(argv[2]) : 10.0;
  if (repeats < 1) repeats = 1;

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both paths run serially\n");
#endif
  std::printf("workload: Au-Au force+gradient sweep, 11 separations, T = %g K\n\n",
              temperature);

  double best_serial = 1e300, best_parallel = 1e300;
  double check_serial = 0.0, check_parallel = 0.0;
  for (int r = 0; r < repeats; ++r) {
    double s = time_sweep(1, temperature, &check_serial);
    double p = time_sweep(0, temperature, &check_parallel);
    if (s < best_serial) best_serial = s;
    if (p < best_parallel) best_parallel = p;
    std::printf("run %d: serial %.3f s, parallel %.3f s\n", r + 1, s, p);
  }
  std::printf("\nbest: serial %.3f s, parallel %.3f s, speedup %.2fx\n",
              best_serial, best_parallel, best_serial / best_parallel);
  if (std::memcmp(&check_serial, &check_parallel, sizeof(double)) != 0) {
    std::printf("FAIL: serial and parallel checksums differ (%.17g vs %.17g)\n",
                check_serial, check_parallel);
    return 1;
  }
  std::printf("checksums bitwise identical: %.17g\n", check_serial);
  return 0;
}
