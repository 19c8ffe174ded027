// Copyright 2026 The lmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMR_TESTS_TEST_UTIL_H_
#define LMR_TESTS_TEST_UTIL_H_

#include <cmath>
#include <string>

#include "gtest/gtest.h"
#include "lmr/linear_transformation.h"
#include "lmr/matrix.h"

namespace lmr::testing {

inline ::testing::AssertionResult MatrixNear(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return ::testing::AssertionFailure() << "shape " << a.rows() << "x" << a.cols()
                                         << " vs " << b.rows() << "x" << b.cols();
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!(std::abs(a(i, j) - b(i, j)) <= tol)) {
        return ::testing::AssertionFailure()
               << "entry (" << i << "," << j << "): " << a(i, j) << " vs " << b(i, j);
      }
    }
  }
  return ::testing::AssertionSuccess();
}

inline Matrix make(std::size_t rows, std::size_t cols, Vector data) {
  return Matrix(rows, cols, std::move(data));
}

/// Operator on 2 x 2 matrices whose null space is span{Diag(1, -1)}.
inline LinearTransformation diag_null_operator() {
  return LinearTransformation(2, 2,
                              {make(2, 2, {0, 1, 0, 0}), make(2, 2, {0, 0, 1, 0}),
                               make(2, 2, {1, 0, 0, 1})});
}

inline std::string data_path(const std::string& name) {
  return std::string(LMR_TEST_DATA) + "/" + name;
}

}  // namespace lmr::testing

#endif  // LMR_TESTS_TEST_UTIL_H_
