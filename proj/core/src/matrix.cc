// Copyright 2026 The Proplab Authors.
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

#include "proplab/matrix.h"

#include <stdexcept>

namespace proplab {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("Matrix: negative dimension");
  }
  data_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw std::invalid_argument("Matrix: ragged rows");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  Matrix out;
  out.rows_ = static_cast<int>(rows.size());
  out.cols_ = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  out.data_.reserve(static_cast<std::size_t>(out.rows_) * out.cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != out.cols_) {
      throw std::invalid_argument("Matrix: ragged rows");
    }
    out.data_.insert(out.data_.end(), r.begin(), r.end());
  }
  return out;
}

std::vector<std::vector<double>> Matrix::ToRows() const {
  std::vector<std::vector<double>> out(rows_);
  for (int r = 0; r < rows_; ++r) {
    auto span = row(r);
    out[r].assign(span.begin(), span.end());
  }
  return out;
}

}  // namespace proplab
