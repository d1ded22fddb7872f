#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "epf/error.h"
#include "epf/random.h"
#include "epf/regressors.h"
#include "internal.h"

namespace epf {

namespace {

double RbfKernel(const double* a, const double* b, Eigen::Index d, double gamma) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return std::exp(-gamma * s);
}

// LRU cache of kernel rows K(i, .) over the training rows.
class KernelRowCache {
 public:
  KernelRowCache(const Matrix& x, double gamma, double budget_mb)
      : x_(x), gamma_(gamma) {
    const double row_bytes = 8.0 * static_cast<double>(std::max<Eigen::Index>(1, x.rows()));
    capacity_ = std::max<std::size_t>(
        2, static_cast<std::size_t>(budget_mb * 1024.0 * 1024.0 / row_bytes));
  }

  const std::vector<double>& Row(Eigen::Index i) {
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (index_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    const Eigen::Index n = x_.rows();
    const Eigen::Index d = x_.cols();
    std::vector<double> row(static_cast<std::size_t>(n));
    const double* xi = x_.row(i).data();
    for (Eigen::Index t = 0; t < n; ++t) {
      row[static_cast<std::size_t>(t)] = RbfKernel(xi, x_.row(t).data(), d, gamma_);
    }
    lru_.emplace_front(i, std::move(row));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  const Matrix& x_;
  double gamma_;
  std::size_t capacity_;
  std::list<std::pair<Eigen::Index, std::vector<double>>> lru_;
  std::unordered_map<Eigen::Index,
                     std::list<std::pair<Eigen::Index, std::vector<double>>>::iterator>
      index_;
};

struct DualSolution {
  std::vector<double> coef;  // alpha - alpha*
  double bias;
  bool converged;
  double violation;
  std::int64_t iterations;
};

// Epsilon-SVR dual over 2l variables beta = [alpha; alpha*] with signs
// s_t = +1 / -1, linear term p = [eps - y; eps + y] and Q_ts = s_t s_s K.
//   min 1/2 beta' Q beta + p' beta   s.t.  s' beta = 0,  0 <= beta <= C
// Two-variable SMO with second-order working set selection.
DualSolution SolveDual(const Matrix& x, const Vector& y, const SvrParams& p) {
  constexpr double kTau = 1e-12;
  const auto l = static_cast<std::size_t>(x.rows());
  const std::size_t m = 2 * l;
  const double c = p.c;

  std::vector<double> beta(m, 0.0);
  std::vector<double> grad(m);
  std::vector<signed char> sign(m);
  for (std::size_t t = 0; t < l; ++t) {
    sign[t] = 1;
    sign[t + l] = -1;
    grad[t] = p.epsilon - y(static_cast<Eigen::Index>(t));
    grad[t + l] = p.epsilon + y(static_cast<Eigen::Index>(t));
  }
  auto at_upper = [&](std::size_t t) { return beta[t] >= c; };
  auto at_lower = [&](std::size_t t) { return beta[t] <= 0.0; };

  KernelRowCache cache(x, p.gamma, p.cache_mb);
  // RBF: K(t, t) = 1.
  const double qd = 1.0;

  std::int64_t iter = 0;
  double violation = std::numeric_limits<double>::infinity();
  for (;;) {
    // i: maximal violating index in I_up.
    double g_max = -std::numeric_limits<double>::infinity();
    std::size_t i = m;
    for (std::size_t t = 0; t < m; ++t) {
      if (sign[t] == 1) {
        if (!at_upper(t) && -grad[t] >= g_max) {
          g_max = -grad[t];
          i = t;
        }
      } else if (!at_lower(t) && grad[t] >= g_max) {
        g_max = grad[t];
        i = t;
      }
    }
    if (i == m) {
      violation = 0.0;
      break;
    }
    const std::vector<double>& k_i = cache.Row(static_cast<Eigen::Index>(i % l));

    double g_max2 = -std::numeric_limits<double>::infinity();
    double obj_min = std::numeric_limits<double>::infinity();
    std::size_t j = m;
    for (std::size_t t = 0; t < m; ++t) {
      const double kit = k_i[t % l];
      if (sign[t] == 1) {
        if (at_lower(t)) continue;
        const double grad_diff = g_max + grad[t];
        g_max2 = std::max(g_max2, grad[t]);
        if (grad_diff > 0.0) {
          // K_ii + K_tt - 2 s_i s_t Q_it  with Q_it = s_i s_t K_it
          double quad = qd + qd - 2.0 * sign[i] * kit;
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= obj_min) {
            obj_min = obj;
            j = t;
          }
        }
      } else {
        if (at_upper(t)) continue;
        const double grad_diff = g_max - grad[t];
        g_max2 = std::max(g_max2, -grad[t]);
        if (grad_diff > 0.0) {
          double quad = qd + qd + 2.0 * sign[i] * kit;
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= obj_min) {
            obj_min = obj;
            j = t;
          }
        }
      }
    }
    violation = g_max + g_max2;
    if (violation < p.tol || j == m) break;
    if (iter >= p.max_iterations) break;
    ++iter;

    const std::vector<double>& k_j = cache.Row(static_cast<Eigen::Index>(j % l));
    const std::vector<double>& k_i2 = cache.Row(static_cast<Eigen::Index>(i % l));
    const double q_ij = sign[i] * sign[j] * k_i2[j % l];
    const double old_i = beta[i];
    const double old_j = beta[j];

    if (sign[i] != sign[j]) {
      double quad = qd + qd + 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = beta[i] - beta[j];
      beta[i] += delta;
      beta[j] += delta;
      if (diff > 0.0) {
        if (beta[j] < 0.0) {
          beta[j] = 0.0;
          beta[i] = diff;
        }
      } else if (beta[i] < 0.0) {
        beta[i] = 0.0;
        beta[j] = -diff;
      }
      if (diff > 0.0) {
        if (beta[i] > c) {
          beta[i] = c;
          beta[j] = c - diff;
        }
      } else if (beta[j] > c) {
        beta[j] = c;
        beta[i] = c + diff;
      }
    } else {
      double quad = qd + qd - 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = beta[i] + beta[j];
      beta[i] -= delta;
      beta[j] += delta;
      if (sum > c) {
        if (beta[i] > c) {
          beta[i] = c;
          beta[j] = sum - c;
        }
      } else if (beta[j] < 0.0) {
        beta[j] = 0.0;
        beta[i] = sum;
      }
      if (sum > c) {
        if (beta[j] > c) {
          beta[j] = c;
          beta[i] = sum - c;
        }
      } else if (beta[i] < 0.0) {
        beta[i] = 0.0;
        beta[j] = sum;
      }
    }

    const double d_i = beta[i] - old_i;
    const double d_j = beta[j] - old_j;
    for (std::size_t t = 0; t < m; ++t) {
      // Q_it = s_i s_t K(i, t)
      grad[t] += sign[t] * (sign[i] * k_i2[t % l] * d_i + sign[j] * k_j[t % l] * d_j);
    }
  }

  // Bias from free variables, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const double yg = sign[t] * grad[t];
    if (at_upper(t)) {
      if (sign[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (at_lower(t)) {
      if (sign[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  DualSolution sol;
  sol.coef.resize(l);
  for (std::size_t t = 0; t < l; ++t) sol.coef[t] = beta[t] - beta[t + l];
  sol.bias = -rho;
  sol.violation = violation;
  sol.iterations = iter;
  sol.converged = !(iter >= p.max_iterations && violation > 10.0 * p.tol);
  return sol;
}

}  // namespace

FittedModel FitSvr(const Matrix& x, const Vector& y, const SvrParams& params,
                   std::uint64_t seed) {
  RegressorSpec spec{params, seed};
  spec.Validate();
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y row counts differ");
  }
  if (x.rows() == 0) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training rows");
  }
  const auto n = static_cast<std::size_t>(x.rows());

  Matrix x_fit;
  Vector y_fit;
  const bool capped = params.max_train > 0 && n > params.max_train;
  if (capped) {
    Rng rng(seed);
    const auto rows = rng.SampleWithoutReplacement(n, params.max_train);
    x_fit = TakeRows(x, rows);
    y_fit = TakeRows(y, rows);
  }
  const Matrix& xs = capped ? x_fit : x;
  const Vector& ys = capped ? y_fit : y;

  const DualSolution sol = SolveDual(xs, ys, params);

  SvrState state;
  std::vector<Eigen::Index> support;
  for (std::size_t t = 0; t < sol.coef.size(); ++t) {
    if (sol.coef[t] != 0.0) support.push_back(static_cast<Eigen::Index>(t));
  }
  state.support = TakeRows(xs, support);
  state.dual_coef.resize(static_cast<Eigen::Index>(support.size()));
  for (std::size_t s = 0; s < support.size(); ++s) {
    state.dual_coef(static_cast<Eigen::Index>(s)) =
        sol.coef[static_cast<std::size_t>(support[s])];
  }
  state.bias = sol.bias;
  state.converged = sol.converged;
  state.final_violation = sol.violation;
  state.iterations = sol.iterations;
  state.rows_used = static_cast<std::size_t>(xs.rows());
  state.rows_total = n;
  return FittedModel(spec, std::move(state), DefaultFeatureNames(x.cols()));
}

double SvrPredictOne(const SvrState& state, double gamma, const double* row) {
  double f = state.bias;
  const Eigen::Index d = state.support.cols();
  for (Eigen::Index s = 0; s < state.support.rows(); ++s) {
    f += state.dual_coef(s) * RbfKernel(state.support.row(s).data(), row, d, gamma);
  }
  return f;
}

}  // namespace epf
