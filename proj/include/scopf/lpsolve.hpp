#ifndef SCOPF_LPSOLVE_HPP
#define SCOPF_LPSOLVE_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

#include "scopf/util.hpp"

namespace scopf {

// Bounded-variable linear program in standard equality form:
//   min c'x   s.t.  A x = b,   lo <= x <= hi   (infinite bounds allowed).
struct LpProblem {
  std::vector<double> c;
  std::vector<double> lo, hi;
  std::vector<std::vector<std::pair<int, double>>> cols;  // per var: (row, coef)
  std::vector<double> b;

  int n() const { return static_cast<int>(c.size()); }
  int m() const { return static_cast<int>(b.size()); }

  int add_var(double lower, double upper, double obj) {
    c.push_back(obj);
    lo.push_back(lower);
    hi.push_back(upper);
    cols.emplace_back();
    return n() - 1;
  }
  int add_row(double rhs) {
    b.push_back(rhs);
    return m() - 1;
  }
  void add_coef(int row, int var, double a) {
    if (a != 0.0) cols[var].push_back({row, a});
  }
  void add_to_rhs(int row, double v) { b[row] += v; }

  bool well_formed() const {
    if (lo.size() != c.size() || hi.size() != c.size() || cols.size() != c.size())
      return false;
    for (int j = 0; j < n(); ++j) {
      if (std::isnan(c[j]) || std::isnan(lo[j]) || std::isnan(hi[j]) || lo[j] > hi[j])
        return false;
      for (auto [r, a] : cols[j])
        if (r < 0 || r >= m() || std::isnan(a)) return false;
    }
    for (double v : b)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double objective_value(const std::vector<double>& x) const {
    double obj = 0.0;
    for (int j = 0; j < n(); ++j) obj += c[j] * x[j];
    return obj;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;              // primal values, one per variable
  std::vector<double> y;              // duals, one per row
  std::vector<double> reduced_costs;  // one per variable
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 50000;
  double tol_pivot = 1e-9;    // smallest usable ratio-test pivot
  double tol_dj = 1e-9;       // reduced-cost optimality threshold
  double tol_degenerate = 1e-10;
  int refactor_every = 50;    // pivots between dense refactorizations
  int bland_after = 200;      // consecutive degenerate pivots before Bland's rule
};

namespace detail {

// Dense LU with partial pivoting for the simplex basis.
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

  // x := B^{-1} v
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

  // x := B^{-T} v
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

}  // namespace detail

// Revised primal simplex with bounded variables, product-form basis updates
// on top of a dense LU, two phases with artificial variables, Dantzig pricing
// and Bland's rule as the anti-cycling fallback.
class RevisedSimplex {
public:
  RevisedSimplex(const LpProblem& p, const LpOptions& opt) : p_(p), opt_(opt) {}

  LpSolution solve() {
    assert(p_.well_formed());
    n_ = p_.n();
    m_ = p_.m();
    total_ = n_ + m_;
    if (m_ == 0) return solve_unconstrained();

    setup();

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1_cost(total_, 0.0);
    for (int j = n_; j < total_; ++j) phase1_cost[j] = 1.0;
    LpStatus st = iterate(phase1_cost);
    if (st == LpStatus::IterationLimit) return extract(st);
    double infeas = 0.0;
    for (int j = n_; j < total_; ++j) infeas += value_[j];
    if (infeas > 1e-7) return extract(LpStatus::Infeasible);

    // Artificials are pinned at zero from here on.
    for (int j = n_; j < total_; ++j) {
      lo_[j] = hi_[j] = 0.0;
      if (state_[j] != State::Basic) {
        state_[j] = State::AtLower;
        value_[j] = 0.0;
      }
    }

    std::vector<double> cost(total_, 0.0);
    for (int j = 0; j < n_; ++j) cost[j] = p_.c[j];
    st = iterate(cost);
    return extract(st);
  }

private:
  enum class State : char { Basic, AtLower, AtUpper, FreeZero };

  const LpProblem& p_;
  LpOptions opt_;
  int n_ = 0, m_ = 0, total_ = 0;

  std::vector<int> basis_;           // row -> basic column
  std::vector<int> in_row_;          // column -> row if basic, else -1
  std::vector<State> state_;
  std::vector<double> value_;
  std::vector<double> lo_, hi_;
  std::vector<int> art_sign_;        // artificial column orientation per row
  detail::DenseLu lu_;
  struct Eta {
    int row;
    std::vector<double> w;
  };
  std::vector<Eta> etas_;
  int iterations_ = 0;
  int degenerate_run_ = 0;

  // column j of the augmented matrix into dense vector out
  void scatter_column(int j, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (j < n_) {
      for (auto [r, a] : p_.cols[j]) out[r] += a;
    } else {
      out[j - n_] = art_sign_[j - n_];
    }
  }

  void setup() {
    lo_.assign(total_, 0.0);
    hi_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = p_.lo[j];
      hi_[j] = p_.hi[j];
    }
    for (int j = n_; j < total_; ++j) {
      lo_[j] = 0.0;
      hi_[j] = kInf;
    }
    state_.assign(total_, State::AtLower);
    value_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) {
        state_[j] = State::AtLower;
        value_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        state_[j] = State::AtUpper;
        value_[j] = hi_[j];
      } else {
        state_[j] = State::FreeZero;
        value_[j] = 0.0;
      }
    }
    // Residual orientation decides each artificial's sign so the slack basis
    // starts feasible.
    std::vector<double> r = p_.b;
    for (int j = 0; j < n_; ++j)
      if (value_[j] != 0.0)
        for (auto [row, a] : p_.cols[j]) r[row] -= a * value_[j];
    art_sign_.resize(m_);
    basis_.resize(m_);
    in_row_.assign(total_, -1);
    for (int i = 0; i < m_; ++i) {
      art_sign_[i] = r[i] >= 0.0 ? 1 : -1;
      int j = n_ + i;
      basis_[i] = j;
      in_row_[j] = i;
      state_[j] = State::Basic;
      value_[j] = std::abs(r[i]);
    }
    refactorize();
  }

  bool refactorize() {
    etas_.clear();
    std::vector<double> dense(m_ * m_, 0.0);
    std::vector<double> col(m_);
    for (int i = 0; i < m_; ++i) {
      scatter_column(basis_[i], col);
      for (int r = 0; r < m_; ++r) dense[r * m_ + i] = col[r];
    }
    return lu_.factor(std::move(dense), m_);
  }

  void ftran(std::vector<double>& v) const {
    lu_.solve(v);
    for (const auto& e : etas_) {
      double piv = v[e.row] / e.w[e.row];
      if (piv != 0.0) {
        for (int i = 0; i < m_; ++i) v[i] -= e.w[i] * piv;
        v[e.row] = piv;
      } else {
        v[e.row] = 0.0;
      }
    }
  }

  void btran(std::vector<double>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->row];
      for (int i = 0; i < m_; ++i)
        if (i != it->row) acc -= it->w[i] * v[i];
      v[it->row] = acc / it->w[it->row];
    }
    lu_.solve_transpose(v);
  }

  // Recomputes basic values from scratch (after refactorization, and at exit).
  void recompute_basics() {
    std::vector<double> r = p_.b;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == State::Basic) continue;
      double v = value_[j];
      if (v == 0.0) continue;
      if (j < n_) {
        for (auto [row, a] : p_.cols[j]) r[row] -= a * v;
      } else {
        r[j - n_] -= art_sign_[j - n_] * v;
      }
    }
    ftran(r);
    for (int i = 0; i < m_; ++i) value_[basis_[i]] = r[i];
  }

  LpStatus iterate(const std::vector<double>& cost) {
    int since_refactor = 0;
    std::vector<double> y(m_), w(m_);
    for (; iterations_ < opt_.max_iterations; ++iterations_) {
      // duals for the working cost vector
      for (int i = 0; i < m_; ++i) y[i] = cost[basis_[i]];
      btran(y);

      bool use_bland = degenerate_run_ >= opt_.bland_after;
      int entering = -1, dir = 0;
      double best = opt_.tol_dj;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == State::Basic) continue;
        if (lo_[j] == hi_[j] && state_[j] != State::FreeZero) continue;  // fixed
        double dj = cost[j];
        if (j < n_) {
          for (auto [r, a] : p_.cols[j]) dj -= y[r] * a;
        } else {
          dj -= y[j - n_] * art_sign_[j - n_];
        }
        int d = 0;
        if (state_[j] == State::AtLower && dj < -opt_.tol_dj) d = 1;
        else if (state_[j] == State::AtUpper && dj > opt_.tol_dj) d = -1;
        else if (state_[j] == State::FreeZero && std::abs(dj) > opt_.tol_dj)
          d = dj < 0 ? 1 : -1;
        if (d == 0) continue;
        if (use_bland) {
          entering = j;
          dir = d;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          entering = j;
          dir = d;
        }
      }
      if (entering < 0) {
        recompute_basics();
        return LpStatus::Optimal;
      }

      scatter_column(entering, w);
      ftran(w);

      // Ratio test: the entering variable moves t >= 0 in direction dir,
      // basics move by -dir * w.  A bound flip needs no pivot.
      double t_flip = hi_[entering] - lo_[entering];  // inf for free/one-sided
      double t_best = t_flip;
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        double wi = dir * w[i];
        if (std::abs(wi) <= opt_.tol_pivot) continue;
        int bj = basis_[i];
        double t;
        bool to_upper;
        if (wi > 0) {  // basic decreases toward its lower bound
          if (!std::isfinite(lo_[bj])) continue;
          t = (value_[bj] - lo_[bj]) / wi;
          to_upper = false;
        } else {  // basic increases toward its upper bound
          if (!std::isfinite(hi_[bj])) continue;
          t = (value_[bj] - hi_[bj]) / wi;
          to_upper = true;
        }
        if (t < 0) t = 0;  // tiny infeasibility from roundoff
        bool better;
        if (leave_row < 0) {
          better = t < t_best;  // beat the bound flip
        } else if (t < t_best - 1e-12) {
          better = true;
        } else if (t <= t_best + 1e-12) {
          // tie-break: Bland wants the smallest variable index, otherwise
          // prefer the larger pivot for stability
          better = use_bland ? basis_[i] < basis_[leave_row]
                             : std::abs(w[i]) > std::abs(w[leave_row]);
        } else {
          better = false;
        }
        if (better) {
          t_best = t;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }

      if (!std::isfinite(t_best)) return LpStatus::Unbounded;

      degenerate_run_ = t_best <= opt_.tol_degenerate ? degenerate_run_ + 1 : 0;

      if (leave_row < 0) {
        // bound flip
        value_[entering] = dir > 0 ? hi_[entering] : lo_[entering];
        state_[entering] = dir > 0 ? State::AtUpper : State::AtLower;
        for (int i = 0; i < m_; ++i) value_[basis_[i]] -= dir * t_best * w[i];
        continue;
      }

      // pivot
      double step = dir * t_best;
      for (int i = 0; i < m_; ++i) value_[basis_[i]] -= step * w[i];
      int leaving = basis_[leave_row];
      value_[entering] = entering_start_value(entering) + step;
      value_[leaving] = leave_to_upper ? hi_[leaving] : lo_[leaving];
      state_[leaving] = leave_to_upper ? State::AtUpper : State::AtLower;
      state_[entering] = State::Basic;
      basis_[leave_row] = entering;
      in_row_[leaving] = -1;
      in_row_[entering] = leave_row;

      etas_.push_back({leave_row, w});
      if (++since_refactor >= opt_.refactor_every) {
        // A singular rebuild means the basis itself went numerically bad;
        // there is no cheaper repair at this scale, so stop honestly.
        if (!refactorize()) return LpStatus::IterationLimit;
        recompute_basics();
        since_refactor = 0;
      }
    }
    return LpStatus::IterationLimit;
  }

  double entering_start_value(int j) const {
    switch (state_[j]) {
      case State::AtLower: return lo_[j];
      case State::AtUpper: return hi_[j];
      default: return 0.0;
    }
  }

  LpSolution solve_unconstrained() {
    LpSolution sol;
    sol.x.assign(n_, 0.0);
    sol.reduced_costs = p_.c;
    sol.status = LpStatus::Optimal;
    for (int j = 0; j < n_; ++j) {
      if (p_.c[j] > 0) {
        if (!std::isfinite(p_.lo[j])) return unbounded();
        sol.x[j] = p_.lo[j];
      } else if (p_.c[j] < 0) {
        if (!std::isfinite(p_.hi[j])) return unbounded();
        sol.x[j] = p_.hi[j];
      } else {
        sol.x[j] = std::isfinite(p_.lo[j]) ? p_.lo[j]
                   : std::isfinite(p_.hi[j]) ? p_.hi[j]
                                             : 0.0;
      }
    }
    sol.objective = p_.objective_value(sol.x);
    return sol;
  }

  LpSolution unbounded() {
    LpSolution sol;
    sol.status = LpStatus::Unbounded;
    sol.x.assign(n_, 0.0);
    sol.y.assign(m_, 0.0);
    sol.reduced_costs.assign(n_, 0.0);
    sol.iterations = iterations_;
    return sol;
  }

  LpSolution extract(LpStatus st) {
    LpSolution sol;
    sol.status = st;
    sol.iterations = iterations_;
    sol.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) sol.x[j] = value_[j];
    sol.objective = p_.objective_value(sol.x);
    sol.y.assign(m_, 0.0);
    sol.reduced_costs.assign(n_, 0.0);
    if (st == LpStatus::Optimal || st == LpStatus::Infeasible) {
      std::vector<double> cost(total_, 0.0);
      for (int j = 0; j < n_; ++j) cost[j] = p_.c[j];
      std::vector<double> y(m_);
      for (int i = 0; i < m_; ++i) y[i] = cost[basis_[i]];
      btran(y);
      sol.y = y;
      for (int j = 0; j < n_; ++j) {
        double dj = p_.c[j];
        for (auto [r, a] : p_.cols[j]) dj -= y[r] * a;
        sol.reduced_costs[j] = dj;
      }
    }
    return sol;
  }
};

inline LpSolution solve(const LpProblem& p, const LpOptions& opt = {}) {
  RevisedSimplex s(p, opt);
  return s.solve();
}

}  // namespace scopf

#endif  // SCOPF_LPSOLVE_HPP
