// Nonparametric MLE for competing risks current status data.
//
// The K-tuple F is parametrised by its jumps: q(k,j) >= 0 is the increase of
// F_k at support point j and q_inf the mass beyond the last point, so that
// F_k(i) = sum_{j<=i} q(k,j) and 1 - F_+(i) = q_inf + sum_k sum_{j>i} q(k,j).
// The likelihood is then a mixture likelihood over the simplex. Dropping the
// simplex constraint and subtracting sum(q) leaves a problem over q >= 0 whose
// maximiser lies on the simplex, so the causes are only coupled through the
// smooth objective. That problem is solved by an active-set Newton method:
// Newton steps on the positive atoms plus the local maxima of the gradient
// among the zero atoms, truncated at the boundary (an atom that hits zero
// leaves the support) and safeguarded by an Armijo backtracking search.
//
// Atoms (k,j) and (k,j+1) give the same likelihood whenever point j carries
// neither cause-k events nor censored subjects; only the rightmost atom of
// each such run is kept, which places F_k(j) at its smallest maximising value.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "crcs/estimators.hpp"
#include "crcs/isotonic.hpp"

namespace crcs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBeyond = -1;

struct Atom {
  int cause;          // kBeyond for the mass beyond the last point
  std::size_t point;  // unused for kBeyond
};

class MixtureProblem {
 public:
  MixtureProblem(const TallyTable& tally, double floor)
      : causes_(tally.causes()), m_(tally.size()), floor_(floor) {
    const double n = static_cast<double>(tally.n());
    wa_.assign(static_cast<std::size_t>(causes_) * m_, 0.0);
    wb_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      wb_[i] = static_cast<double>(tally.censored(i)) / n;
      for (int k = 0; k < causes_; ++k) wa_[idx(k, i)] = static_cast<double>(tally.count(i, k)) / n;
    }
    for (int k = 0; k < causes_; ++k) {
      for (std::size_t j = 0; j < m_; ++j) {
        if (wa_[idx(k, j)] > 0.0 || wb_[j] > 0.0) atoms_.push_back({k, j});
      }
    }
    atoms_.push_back({kBeyond, 0});
    F_.assign(static_cast<std::size_t>(causes_) * m_, 0.0);
    S_.assign(m_, 0.0);
  }

  std::size_t atom_count() const { return atoms_.size(); }
  const Atom& atom(std::size_t a) const { return atoms_[a]; }
  bool is_beyond(std::size_t a) const { return atoms_[a].cause == kBeyond; }

  // Jumps of an initial F (rows: points, cols: causes) moved onto the kept atoms.
  std::vector<double> atoms_from(const Eigen::MatrixXd& values) const {
    std::vector<double> q(atoms_.size(), 0.0);
    double used = 0.0;
    std::size_t a = 0;
    for (int k = 0; k < causes_; ++k) {
      double previous = 0.0;
      double carry = 0.0;
      for (std::size_t j = 0; j < m_; ++j) {
        const double v = values(static_cast<Eigen::Index>(j), k);
        carry += std::max(0.0, v - previous);
        previous = std::max(previous, v);
        if (a < atoms_.size() && atoms_[a].cause == k && atoms_[a].point == j) {
          q[a++] = carry;
          used += carry;
          carry = 0.0;
        }
      }
    }
    q.back() = std::max(0.0, 1.0 - used);
    return q;
  }

  // Fills F_, S_ from q.
  void evaluate_values(const std::vector<double>& q) {
    std::fill(F_.begin(), F_.end(), 0.0);
    std::vector<double> mass_at(m_, 0.0);
    for (std::size_t a = 0; a + 1 < atoms_.size(); ++a) {
      F_[idx(atoms_[a].cause, atoms_[a].point)] += q[a];
      mass_at[atoms_[a].point] += q[a];
    }
    for (int k = 0; k < causes_; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        acc += F_[idx(k, i)];
        F_[idx(k, i)] = acc;
      }
    }
    double tail = q.back();
    for (std::size_t i = m_; i-- > 0;) {
      S_[i] = tail;
      tail += mass_at[i];
    }
  }

  // Homogenised objective sum w log(values) - sum q; -inf off the domain.
  double objective(const std::vector<double>& q) {
    evaluate_values(q);
    return likelihood_at_values() - std::accumulate(q.begin(), q.end(), 0.0);
  }

  // Normalised log likelihood at the current values.
  double likelihood_at_values() const {
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (wb_[i] > 0.0) total += term(wb_[i], S_[i]);
      for (int k = 0; k < causes_; ++k) {
        const double w = wa_[idx(k, i)];
        if (w > 0.0) total += term(w, F_[idx(k, i)]);
      }
    }
    return total;
  }

  // Gradient and the cumulative curvature sums at the current values.
  void derivatives(std::vector<double>& grad) {
    const auto km = static_cast<std::size_t>(causes_) * m_;
    suffix_u_.assign(km + static_cast<std::size_t>(causes_), 0.0);
    suffix_d_.assign(km + static_cast<std::size_t>(causes_), 0.0);
    prefix_v_.assign(m_ + 1, 0.0);
    prefix_db_.assign(m_ + 1, 0.0);
    for (int k = 0; k < causes_; ++k) {
      double su = 0.0;
      double sd = 0.0;
      for (std::size_t i = m_; i-- > 0;) {
        const double w = wa_[idx(k, i)];
        if (w > 0.0) {
          const double f = std::max(F_[idx(k, i)], floor_);
          su += w / f;
          sd += w / (f * f);
        }
        suffix_u_[sidx(k, i)] = su;
        suffix_d_[sidx(k, i)] = sd;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      double d = 0.0;
      if (wb_[i] > 0.0) {
        const double s = std::max(S_[i], floor_);
        v = wb_[i] / s;
        d = wb_[i] / (s * s);
      }
      prefix_v_[i + 1] = prefix_v_[i] + v;
      prefix_db_[i + 1] = prefix_db_[i] + d;
    }
    grad.resize(atoms_.size());
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      const Atom& at = atoms_[a];
      grad[a] = at.cause == kBeyond
                    ? prefix_v_[m_] - 1.0
                    : suffix_u_[sidx(at.cause, at.point)] + prefix_v_[at.point] - 1.0;
    }
  }

  // Negative Hessian entry between two atoms (valid after derivatives()).
  double curvature(std::size_t a, std::size_t b) const {
    const Atom& x = atoms_[a];
    const Atom& y = atoms_[b];
    if (x.cause == kBeyond && y.cause == kBeyond) return prefix_db_[m_];
    if (x.cause == kBeyond) return prefix_db_[y.point];
    if (y.cause == kBeyond) return prefix_db_[x.point];
    double h = prefix_db_[std::min(x.point, y.point)];
    if (x.cause == y.cause) h += suffix_d_[sidx(x.cause, std::max(x.point, y.point))];
    return h;
  }

  Eigen::MatrixXd values_matrix() const {
    Eigen::MatrixXd v(static_cast<Eigen::Index>(m_), causes_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (int k = 0; k < causes_; ++k) v(static_cast<Eigen::Index>(i), k) = F_[idx(k, i)];
    }
    return v;
  }

 private:
  static double term(double w, double value) { return value > 0.0 ? w * std::log(value) : -kInf; }
  std::size_t idx(int k, std::size_t i) const { return static_cast<std::size_t>(k) * m_ + i; }
  std::size_t sidx(int k, std::size_t i) const { return static_cast<std::size_t>(k) * (m_ + 1) + i; }

  int causes_;
  std::size_t m_;
  double floor_;
  std::vector<double> wa_;
  std::vector<double> wb_;
  std::vector<Atom> atoms_;
  std::vector<double> F_;
  std::vector<double> S_;
  std::vector<double> suffix_u_;
  std::vector<double> suffix_d_;
  std::vector<double> prefix_v_;
  std::vector<double> prefix_db_;
};

double stationarity(const std::vector<double>& q, const std::vector<double>& grad) {
  double r = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    r = std::max(r, q[a] > 0.0 ? std::abs(grad[a]) : std::max(grad[a], 0.0));
  }
  return r;
}

// Positive atoms plus, for every run of zero atoms of one cause, the one with
// the largest positive gradient.
std::vector<std::size_t> candidate_set(const MixtureProblem& problem, const std::vector<double>& q,
                                       const std::vector<double>& grad, double add_tol) {
  std::vector<std::size_t> set;
  std::size_t best = q.size();
  auto flush = [&] {
    if (best != q.size()) set.push_back(best);
    best = q.size();
  };
  int current_cause = -2;
  for (std::size_t a = 0; a < q.size(); ++a) {
    const int cause = problem.atom(a).cause;
    if (cause != current_cause) {
      flush();
      current_cause = cause;
    }
    if (q[a] > 0.0) {
      flush();
      set.push_back(a);
    } else if (grad[a] > add_tol && (best == q.size() || grad[a] > grad[best])) {
      best = a;
    }
  }
  flush();
  std::sort(set.begin(), set.end());
  return set;
}

MleResult finish(MixtureProblem& problem, std::vector<double> q, const TallyTable& tally, int iterations,
                 std::vector<double> trace) {
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& v : q) v /= total;
  problem.evaluate_values(q);
  MleResult result;
  result.estimate.support = tally.support();
  result.estimate.kind = EstimatorKind::kMle;
  result.estimate.values = problem.values_matrix();
  result.iterations = iterations;
  result.log_likelihood = log_likelihood(tally, result.estimate.values);
  result.kkt_residual = kkt_residual(tally, result.estimate.values);
  result.likelihood_trace = std::move(trace);
  return result;
}

MleResult univariate_mle(const TallyTable& tally) {
  MleResult result;
  result.estimate = naive_estimate(tally);
  result.estimate.kind = EstimatorKind::kMle;
  result.log_likelihood = log_likelihood(tally, result.estimate.values);
  result.kkt_residual = kkt_residual(tally, result.estimate.values);
  result.likelihood_trace = {result.log_likelihood};
  return result;
}

}  // namespace

MleResult mle(const TallyTable& tally, const SolverSettings& settings) {
  settings.validate();
  // For one cause the full likelihood is the marginal one.
  if (tally.causes() == 1) return univariate_mle(tally);

  const double n = static_cast<double>(tally.n());
  MixtureProblem problem(tally, settings.floor_epsilon);

  // Start from the monotonised simple estimator, shrunk so the sum constraint is slack.
  constexpr double kStartSlack = 1e-6;
  Eigen::MatrixXd start = naive_estimate(tally).values;
  double top = 0.0;
  if (start.rows() > 0) top = start.row(start.rows() - 1).sum();
  start *= (1.0 - kStartSlack) * std::min(1.0, top > 0.0 ? 1.0 / top : 1.0);
  std::vector<double> q = problem.atoms_from(start);

  const double target = 1e-2 * settings.kkt_tolerance;
  constexpr double kArmijo = 1e-4;
  constexpr double kFlat = 1e-13;
  std::vector<double> grad;
  std::vector<double> trace;
  double value = problem.objective(q);
  trace.push_back(n * problem.likelihood_at_values());

  int iter = 0;
  for (; iter < settings.max_outer_iterations; ++iter) {
    problem.derivatives(grad);
    const double residual = stationarity(q, grad);
    if (residual <= target) break;

    std::vector<std::size_t> set = candidate_set(problem, q, grad, target);
    Eigen::VectorXd direction;
    while (true) {
      const auto f = static_cast<Eigen::Index>(set.size());
      Eigen::MatrixXd hessian(f, f);
      Eigen::VectorXd g(f);
      double diag_max = 0.0;
      for (Eigen::Index r = 0; r < f; ++r) {
        g(r) = grad[set[static_cast<std::size_t>(r)]];
        for (Eigen::Index c = 0; c <= r; ++c) {
          const double h = problem.curvature(set[static_cast<std::size_t>(r)], set[static_cast<std::size_t>(c)]);
          hessian(r, c) = h;
          hessian(c, r) = h;
        }
        diag_max = std::max(diag_max, hessian(r, r));
      }
      hessian.diagonal().array() += 1e-12 * std::max(1.0, diag_max);
      direction = hessian.ldlt().solve(g);
      if (!direction.allFinite() || g.dot(direction) <= 0.0) direction = g;

      // Zero atoms the Newton step would push negative leave the candidate set.
      std::vector<std::size_t> kept;
      for (Eigen::Index r = 0; r < f; ++r) {
        const std::size_t a = set[static_cast<std::size_t>(r)];
        if (!(q[a] == 0.0 && direction(r) < 0.0)) kept.push_back(a);
      }
      if (kept.size() == set.size() || kept.empty()) break;
      set = std::move(kept);
    }

    // Step to the Newton point or to the first atom reaching zero.
    double t_max = 1.0;
    std::size_t blocking = q.size();
    for (std::size_t r = 0; r < set.size(); ++r) {
      const double d = direction(static_cast<Eigen::Index>(r));
      if (d < 0.0) {
        const double t = q[set[r]] / -d;
        if (t < t_max) {
          t_max = t;
          blocking = set[r];
        }
      }
    }
    double slope = 0.0;
    for (std::size_t r = 0; r < set.size(); ++r) slope += grad[set[r]] * direction(static_cast<Eigen::Index>(r));

    std::vector<double> trial(q);
    double t = t_max;
    double trial_value = -kInf;
    bool accepted = false;
    for (bool first = true; first || t > 1e-18; first = false) {
      trial = q;
      for (std::size_t r = 0; r < set.size(); ++r) {
        trial[set[r]] = std::max(0.0, q[set[r]] + t * direction(static_cast<Eigen::Index>(r)));
      }
      if (first && blocking < q.size()) trial[blocking] = 0.0;
      trial_value = problem.objective(trial);
      if (trial_value >= value + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      const bool flat = std::abs(trial_value - value) <= kFlat * std::max(1.0, std::abs(value));
      // A step that only retires a negligible atom cannot show a measurable gain.
      if (first && blocking < q.size() && flat) {
        accepted = true;
        break;
      }
      // Near the optimum the gain drops below the resolution of the
      // objective; the full step is then judged by the residual instead.
      if (first && flat) {
        std::vector<double> trial_grad;
        problem.derivatives(trial_grad);
        if (stationarity(trial, trial_grad) < residual) {
          accepted = true;
          break;
        }
      }
      t *= settings.contraction;
    }
    if (!accepted) {
      problem.objective(q);
      break;
    }

    // Rescaling onto the simplex never lowers the homogenised objective.
    const double mass = std::accumulate(trial.begin(), trial.end(), 0.0);
    for (double& v : trial) v /= mass;
    const double improvement = trial_value - value;
    q = std::move(trial);
    value = problem.objective(q);
    trace.push_back(n * problem.likelihood_at_values());

    if (improvement <= settings.likelihood_tolerance * std::max(1.0, std::abs(value)) &&
        residual <= settings.kkt_tolerance && t == 1.0) {
      problem.derivatives(grad);
      if (stationarity(q, grad) <= settings.kkt_tolerance) break;
    }
  }

  MleResult result = finish(problem, std::move(q), tally, iter, std::move(trace));
  if (!(result.kkt_residual <= settings.kkt_tolerance)) {
    throw NonConvergence("MLE did not converge: KKT residual " + std::to_string(result.kkt_residual) +
                             " after " + std::to_string(iter) + " iterations",
                         std::move(result));
  }
  return result;
}

}  // namespace crcs
