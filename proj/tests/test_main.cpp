#include <gtest/gtest.h>

#include "parlab/linalg.hpp"

int main(int argc, char** argv) {
  parlab::linalg::select_safe_blas_kernel(argv);
  parlab::linalg::single_threaded_blas();
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
