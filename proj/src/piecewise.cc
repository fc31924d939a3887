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

#include "cfo/piecewise.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfo {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kOutOfDomain: return "out-of-domain";
    case ErrorKind::kInvariant: return "invariant";
    case ErrorKind::kArgument: return "argument";
    case ErrorKind::kStructural: return "structural";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kNoPath: return "no-path";
    case ErrorKind::kInternal: return "internal";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kRefused: return "refused";
  }
  return "unknown";
}

const char* ToString(Shape shape) {
  switch (shape) {
    case Shape::kPiecewiseMonotone: return "piecewise-monotone";
    case Shape::kNonIncreasing: return "non-increasing";
    case Shape::kNonDecreasingConcave: return "non-decreasing-concave";
  }
  return "unknown";
}

PiecewiseFn::PiecewiseFn(std::vector<Breakpoint> points, Shape shape)
    : points_(std::move(points)), shape_(shape) {
  if (points_.empty()) {
    throw Error(ErrorKind::kInvariant, "piecewise function needs a breakpoint");
  }
  for (size_t i = 0; i < points_.size(); ++i) {
    const Breakpoint& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::kInvariant, "non-finite breakpoint");
    }
    if (i > 0) {
      const Breakpoint& q = points_[i - 1];
      if (p.x < q.x) {
        std::ostringstream msg;
        msg << "breakpoint " << i << " at x=" << p.x
            << " precedes the previous one at x=" << q.x;
        throw Error(ErrorKind::kInvariant, msg.str());
      }
      if (p.x == q.x && p.y == q.y) {
        throw Error(ErrorKind::kInvariant, "duplicate breakpoint");
      }
      // Three breakpoints on one abscissa would make the value ambiguous.
      if (i > 1 && p.x == q.x && q.x == points_[i - 2].x) {
        throw Error(ErrorKind::kInvariant, "more than one jump at one abscissa");
      }
    }
  }
  CheckShape();
}

PiecewiseFn PiecewiseFn::Constant(double value, double x_lo, double x_hi) {
  if (x_hi == x_lo) return PiecewiseFn({{x_lo, value}});
  return PiecewiseFn({{x_lo, value}, {x_hi, value}});
}

PiecewiseFn PiecewiseFn::Linear(double x0, double y0, double x1, double y1,
                                Shape shape) {
  return PiecewiseFn({{x0, y0}, {x1, y1}}, shape);
}

void PiecewiseFn::CheckShape() const {
  const int n = num_pieces();
  switch (shape_) {
    case Shape::kPiecewiseMonotone:
      return;
    case Shape::kNonIncreasing:
      for (int i = 0; i < n; ++i) {
        const Piece p = piece(i);
        if (p.y_hi > p.y_lo) {
          std::ostringstream msg;
          msg << "piece " << i << " increases on a non-increasing curve";
          throw Error(ErrorKind::kInvariant, msg.str());
        }
      }
      return;
    case Shape::kNonDecreasingConcave: {
      double previous_slope = kInf;
      for (int i = 0; i < n; ++i) {
        const Piece p = piece(i);
        if (p.is_jump()) {
          throw Error(ErrorKind::kInvariant, "jump on a concave curve");
        }
        const double slope = p.slope();
        if (slope < 0.0) {
          std::ostringstream msg;
          msg << "piece " << i << " decreases on a non-decreasing curve";
          throw Error(ErrorKind::kInvariant, msg.str());
        }
        if (slope > previous_slope * (1.0 + 1e-12) + 1e-12) {
          std::ostringstream msg;
          msg << "slope of piece " << i << " exceeds the previous slope";
          throw Error(ErrorKind::kInvariant, msg.str());
        }
        previous_slope = slope;
      }
      return;
    }
  }
}

int PiecewiseFn::num_pieces() const {
  return points_.size() <= 1 ? static_cast<int>(points_.size())
                             : static_cast<int>(points_.size()) - 1;
}

Piece PiecewiseFn::piece(int index) const {
  if (points_.size() == 1) {
    return {points_[0].x, points_[0].x, points_[0].y, points_[0].y};
  }
  const Breakpoint& a = points_[index];
  const Breakpoint& b = points_[index + 1];
  return {a.x, b.x, a.y, b.y};
}

bool PiecewiseFn::has_jumps() const {
  for (size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].x == points_[i - 1].x) return true;
  }
  return false;
}

double PiecewiseFn::min_value() const {
  double m = kInf;
  for (const Breakpoint& p : points_) m = std::min(m, p.y);
  return m;
}

double PiecewiseFn::max_value() const {
  double m = -kInf;
  for (const Breakpoint& p : points_) m = std::max(m, p.y);
  return m;
}

double PiecewiseFn::operator()(double x) const {
  if (x < domain_lo() - kTol || x > domain_hi() + kTol || std::isnan(x)) {
    std::ostringstream msg;
    msg << "x=" << x << " outside [" << domain_lo() << ", " << domain_hi()
        << "]";
    throw Error(ErrorKind::kOutOfDomain, msg.str());
  }
  x = std::clamp(x, domain_lo(), domain_hi());
  // Last breakpoint with abscissa <= x; at a jump this is the right limit.
  auto it = std::upper_bound(
      points_.begin(), points_.end(), x,
      [](double value, const Breakpoint& p) { return value < p.x; });
  const size_t k = static_cast<size_t>(it - points_.begin()) - 1;
  if (k + 1 >= points_.size()) return points_.back().y;
  const Breakpoint& a = points_[k];
  const Breakpoint& b = points_[k + 1];
  if (x == a.x) return a.y;
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

std::optional<double> PiecewiseFn::InvertPiece(int index, double y) const {
  const Piece p = piece(index);
  if (p.is_flat()) {
    if (std::fabs(y - p.y_lo) <= kTol) return p.x_lo;
    return std::nullopt;
  }
  if (y < p.y_min() - kTol || y > p.y_max() + kTol) return std::nullopt;
  if (p.is_jump()) return p.x_lo;
  const double x = p.x_lo + (y - p.y_lo) * (p.x_hi - p.x_lo) / (p.y_hi - p.y_lo);
  return std::clamp(x, p.x_lo, p.x_hi);
}

std::optional<double> PiecewiseFn::FirstAtOrBelow(double y) const {
  for (int i = 0; i < num_pieces(); ++i) {
    const Piece p = piece(i);
    if (p.y_min() > y + kTol) continue;
    if (p.y_lo <= y + kTol) return p.x_lo;
    // Decreasing piece crossing y from above.
    if (p.is_jump()) return p.x_lo;
    const double x =
        p.x_lo + (y - p.y_lo) * (p.x_hi - p.x_lo) / (p.y_hi - p.y_lo);
    return std::clamp(x, p.x_lo, p.x_hi);
  }
  return std::nullopt;
}

double PiecewiseFn::InverseIncreasing(double y) const {
  if (y < points_.front().y - kTol || y > points_.back().y + kTol) {
    std::ostringstream msg;
    msg << "value " << y << " outside [" << points_.front().y << ", "
        << points_.back().y << "]";
    throw Error(ErrorKind::kOutOfDomain, msg.str());
  }
  for (int i = 0; i < num_pieces(); ++i) {
    const Piece p = piece(i);
    if (y <= p.y_hi) {
      if (p.y_hi == p.y_lo) return p.x_lo;
      const double x =
          p.x_lo + (y - p.y_lo) * (p.x_hi - p.x_lo) / (p.y_hi - p.y_lo);
      return std::clamp(x, p.x_lo, p.x_hi);
    }
  }
  return domain_hi();
}

}  // namespace cfo
