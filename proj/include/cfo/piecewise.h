// Copyright 2026 The CFO Planner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfo/common.h"

namespace cfo {

// Declared shape of a curve, verified when the function is built.
enum class Shape {
  kPiecewiseMonotone,
  kNonIncreasing,
  kNonDecreasingConcave,
};

const char* ToString(Shape shape);

struct Breakpoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

struct Piece {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  bool is_jump() const { return x_hi == x_lo && y_hi != y_lo; }
  bool is_flat() const { return y_hi == y_lo; }
  double slope() const {
    return x_hi > x_lo ? (y_hi - y_lo) / (x_hi - x_lo) : 0.0;
  }
  double y_min() const { return std::min(y_lo, y_hi); }
  double y_max() const { return std::max(y_lo, y_hi); }
};

// Continuous piecewise-linear function given by its breakpoints.
//
// Consecutive breakpoints span one linear piece, so every piece is monotone.
// Two consecutive breakpoints that share an abscissa encode a jump: a
// zero-width piece bridging the left and right limits. Evaluation at a jump
// is right-continuous, matching intervals that are closed on the left.
// A single breakpoint describes a function on a one-point domain.
class PiecewiseFn {
 public:
  PiecewiseFn() = default;

  // Throws kInvariant if the breakpoints are unordered, non-finite, or
  // violate `shape`.
  explicit PiecewiseFn(std::vector<Breakpoint> points,
                       Shape shape = Shape::kPiecewiseMonotone);

  static PiecewiseFn Constant(double value, double x_lo, double x_hi);
  static PiecewiseFn Linear(double x0, double y0, double x1, double y1,
                            Shape shape = Shape::kPiecewiseMonotone);

  const std::vector<Breakpoint>& points() const { return points_; }
  Shape shape() const { return shape_; }
  bool empty() const { return points_.empty(); }

  double domain_lo() const { return points_.front().x; }
  double domain_hi() const { return points_.back().x; }
  int num_pieces() const;
  Piece piece(int index) const;
  bool has_jumps() const;

  double min_value() const;
  double max_value() const;

  // Throws kOutOfDomain when x lies outside the domain by more than kTol.
  double operator()(double x) const;

  // Abscissa on piece `index` where the piece takes value `y`, or nullopt if
  // `y` is outside the piece's range. A flat piece equal to `y` yields its
  // left endpoint.
  std::optional<double> InvertPiece(int index, double y) const;

  // Smallest x with f(x) <= y, for non-increasing functions.
  std::optional<double> FirstAtOrBelow(double y) const;

  // Smallest x with f(x) == y, for strictly increasing functions. Throws
  // kOutOfDomain if y is outside the range.
  double InverseIncreasing(double y) const;

  friend bool operator==(const PiecewiseFn&, const PiecewiseFn&) = default;

 private:
  void CheckShape() const;

  std::vector<Breakpoint> points_;
  Shape shape_ = Shape::kPiecewiseMonotone;
};

// Free-function spellings used throughout the solver.
inline double EvalPw(const PiecewiseFn& f, double x) { return f(x); }
inline std::optional<double> InvertPiece(const PiecewiseFn& f, int index,
                                         double y) {
  return f.InvertPiece(index, y);
}

}  // namespace cfo
