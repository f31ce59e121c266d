#ifndef SCOPF_DENSE_HPP
#define SCOPF_DENSE_HPP

#include <cmath>
#include <vector>

namespace scopf::detail {

// Dense LU with partial pivoting; shared by the simplex basis and the Newton
// power-flow step.
class DenseLu {
public:
  bool factor(std::vector<double> a, int n) {
    n_ = n;
    lu_ = std::move(a);
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int k = 0; k < n; ++k) {
      int piv = k;
      double best = std::abs(lu_[k * n + k]);
      for (int i = k + 1; i < n; ++i) {
        double v = std::abs(lu_[i * n + k]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12) return false;
      if (piv != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_[k * n + j], lu_[piv * n + j]);
        std::swap(perm_[k], perm_[piv]);
      }
      double inv = 1.0 / lu_[k * n + k];
      for (int i = k + 1; i < n; ++i) {
        double f = lu_[i * n + k] * inv;
        lu_[i * n + k] = f;
        if (f != 0.0)
          for (int j = k + 1; j < n; ++j) lu_[i * n + j] -= f * lu_[k * n + j];
      }
    }
    return true;
  }

  // x := A^{-1} v
  void solve(std::vector<double>& v) const {
    std::vector<double> z(n_);
    for (int i = 0; i < n_; ++i) z[i] = v[perm_[i]];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < i; ++j) z[i] -= lu_[i * n_ + j] * z[j];
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) z[i] -= lu_[i * n_ + j] * z[j];
      z[i] /= lu_[i * n_ + i];
    }
    v = std::move(z);
  }

  // x := A^{-T} v
  void solve_transpose(std::vector<double>& v) const {
    std::vector<double> z = v;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) z[i] -= lu_[j * n_ + i] * z[j];
      z[i] /= lu_[i * n_ + i];
    }
    for (int i = n_ - 1; i >= 0; --i)
      for (int j = i + 1; j < n_; ++j) z[i] -= lu_[j * n_ + i] * z[j];
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[perm_[i]] = z[i];
    v = std::move(out);
  }

private:
  int n_ = 0;
  std::vector<double> lu_;
  std::vector<int> perm_;
};

}  // namespace scopf::detail

#endif  // SCOPF_DENSE_HPP
