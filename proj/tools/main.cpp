#include "rlftn/cli.hpp"
#include "rlftn/lapack.hpp"

int main(int argc, char** argv) {
  // Timings compare factorization methods, so BLAS threading is pinned off;
  // it also keeps floating-point reductions deterministic across runs.
  rlftn::lapack::use_single_thread();
  return rlftn::run_cli(argc, argv);
}
