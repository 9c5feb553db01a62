#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hypercon/errors.hpp"

namespace hypercon::detail {

// Partial-pivot LU factorization of a general tridiagonal matrix.
class TridiagLU {
 public:
  TridiagLU(std::vector<double> lower, std::vector<double> diag,
            std::vector<double> upper)
      : n_(static_cast<int>(diag.size())), dl_(std::move(lower)),
        dd_(std::move(diag)), du_(std::move(upper)), du2_(n_, 0.0), pivot_(n_, 0) {
    constexpr double tiny =
        std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon();
    dl_.resize(n_, 0.0);
    du_.resize(n_, 0.0);
    for (int i = 0; i + 1 < n_; ++i) {
      if (std::abs(dd_[i]) >= std::abs(dl_[i])) {
        if (dd_[i] == 0.0) dd_[i] = tiny;
        const double m = dl_[i] / dd_[i];
        dl_[i] = m;
        dd_[i + 1] -= m * du_[i];
        pivot_[i] = 0;
      } else {
        const double m = dd_[i] / dl_[i];
        dd_[i] = dl_[i];
        dl_[i] = m;
        const double tmp = dd_[i + 1];
        dd_[i + 1] = du_[i] - m * tmp;
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -m * du2_[i];
        }
        du_[i] = tmp;
        pivot_[i] = 1;
      }
    }
    if (dd_[n_ - 1] == 0.0) dd_[n_ - 1] = tiny;
  }

  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    for (int i = 0; i + 1 < n_; ++i) {
      if (pivot_[i] == 1) std::swap(x[i], x[i + 1]);
      x[i + 1] -= dl_[i] * x[i];
    }
    x[n_ - 1] /= dd_[n_ - 1];
    if (n_ >= 2) x[n_ - 2] = (x[n_ - 2] - du_[n_ - 2] * x[n_ - 1]) / dd_[n_ - 2];
    for (int i = n_ - 3; i >= 0; --i)
      x[i] = (x[i] - du_[i] * x[i + 1] - du2_[i] * x[i + 2]) / dd_[i];
    return x;
  }

 private:
  int n_;
  std::vector<double> dl_, dd_, du_, du2_;
  std::vector<int> pivot_;
};

}  // namespace hypercon::detail
