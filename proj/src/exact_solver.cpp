#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "graphweave/degree_model.hpp"
#include "graphweave/error.hpp"
#include "graphweave/graph_infer.hpp"

namespace graphweave {

namespace {

constexpr int kMaxExactNodes = 20;

// Column j of the residual is
//   X_rj = known_rj + sum_{i adjacent to j} coef_r(i -> j),
//   known_rj = alpha V1_rj s_j^2 - V2_rj,  coef_r(i -> j) = (1 - alpha) V1_ri s_i s_j,
// so each column only depends on the neighbours chosen for j.
class BranchAndBound {
 public:
  BranchAndBound(const TrajectorySystem& sys, const ExactOptions& opts)
      : sys_(sys), opts_(opts), n_(sys.n()), rows_(sys.rows()) {
    const Vector s = smoothed_degrees(sys.degrees, sys.alpha).array().rsqrt();
    known_ = sys.alpha * sys.V1 * s.cwiseAbs2().asDiagonal() - sys.V2;
    coef_.assign(static_cast<std::size_t>(n_) * n_, Vector());
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i)
        if (i != j) coef(i, j) = (1.0 - sys.alpha) * s[i] * s[j] * sys.V1.col(i);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) pairs_.push_back({i, j});
    need_ = sys.degrees;
    slots_.assign(static_cast<std::size_t>(n_), n_ - 1);
    decided_.assign(static_cast<std::size_t>(n_) * n_, 0);
    chosen_.assign(static_cast<std::size_t>(n_) * n_, 0);
    col_lb_.resize(static_cast<std::size_t>(n_));
    scratch_.resize(static_cast<std::size_t>(n_));
  }

  ExactResult run() {
    for (int j = 0; j < n_; ++j) col_lb_[static_cast<std::size_t>(j)] = column_bound(j);
    search(0, std::accumulate(col_lb_.begin(), col_lb_.end(), 0.0));
    if (!found_) throw InfeasibleError("no graph satisfies the degree sequence");
    return {Graph(n_, best_edges_), best_, nodes_};
  }

 private:
  Vector& coef(int from, int to) { return coef_[static_cast<std::size_t>(to) * n_ + from]; }
  std::size_t at(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  // Smallest L1 norm column j can reach with need_j more neighbours among
  // its undecided partners; exact per column, memoised on the decision state.
  double column_bound(int j) {
    std::uint32_t open = 0, taken = 0;
    int m = 0;
    for (int i = 0; i < n_; ++i) {
      if (i == j) continue;
      if (!decided_[at(i, j)]) {
        open |= 1u << i;
        scratch_[static_cast<std::size_t>(m++)] = i;
      } else if (chosen_[at(i, j)]) {
        taken |= 1u << i;
      }
    }
    const int need = need_[static_cast<std::size_t>(j)];
    if (need < 0 || need > m) return std::numeric_limits<double>::infinity();
    const std::uint64_t key = (static_cast<std::uint64_t>(j) << 40) | (static_cast<std::uint64_t>(open) << 20) | taken;
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    acc_ = known_.col(j);
    double best = std::numeric_limits<double>::infinity();
    enumerate(j, 0, m, need, best);
    if (memo_.size() > kMemoLimit) memo_.clear();
    memo_.emplace(key, best);
    return best;
  }

  void enumerate(int j, int start, int m, int left, double& best) {
    if (left == 0) {
      best = std::min(best, acc_.lpNorm<1>());
      return;
    }
    for (int q = start; q <= m - left; ++q) {
      const Vector& c = coef(scratch_[static_cast<std::size_t>(q)], j);
      acc_ += c;
      enumerate(j, q + 1, m, left - 1, best);
      acc_ -= c;
    }
  }

  bool feasible_after(int v, int value) const {
    const int need = need_[static_cast<std::size_t>(v)] - value;
    return need >= 0 && need <= slots_[static_cast<std::size_t>(v)] - 1;
  }

  void apply(int i, int j, int value) {
    decided_[at(i, j)] = decided_[at(j, i)] = 1;
    chosen_[at(i, j)] = chosen_[at(j, i)] = static_cast<char>(value);
    --slots_[static_cast<std::size_t>(i)];
    --slots_[static_cast<std::size_t>(j)];
    if (value) {
      --need_[static_cast<std::size_t>(i)];
      --need_[static_cast<std::size_t>(j)];
      known_.col(j) += coef(i, j);
      known_.col(i) += coef(j, i);
    }
  }

  void undo(int i, int j, int value) {
    decided_[at(i, j)] = decided_[at(j, i)] = 0;
    chosen_[at(i, j)] = chosen_[at(j, i)] = 0;
    ++slots_[static_cast<std::size_t>(i)];
    ++slots_[static_cast<std::size_t>(j)];
    if (value) {
      ++need_[static_cast<std::size_t>(i)];
      ++need_[static_cast<std::size_t>(j)];
      known_.col(j) -= coef(i, j);
      known_.col(i) -= coef(j, i);
    }
  }

  bool prune(double lb) const {
    return found_ && lb > best_ * (1.0 + 1e-9) + 1e-12;
  }

  // Bound for the child (i, j) = value; leaves the state unchanged.
  double child_bound(int i, int j, int value, double lb, double& bi, double& bj) {
    apply(i, j, value);
    bi = column_bound(i);
    bj = column_bound(j);
    undo(i, j, value);
    return lb - col_lb_[static_cast<std::size_t>(i)] - col_lb_[static_cast<std::size_t>(j)] + bi + bj;
  }

  void search(std::size_t p, double lb) {
    if (prune(lb)) return;
    if (p == pairs_.size()) {
      leaf();
      return;
    }
    const auto [i, j] = pairs_[p];
    struct Child {
      int value;
      double lb, bi, bj;
    };
    Child kids[2];
    int count = 0;
    for (int value = 0; value <= 1; ++value) {
      if (!feasible_after(i, value) || !feasible_after(j, value)) continue;
      Child c{value, 0.0, 0.0, 0.0};
      c.lb = child_bound(i, j, value, lb, c.bi, c.bj);
      kids[count++] = c;
    }
    if (count == 2 && kids[1].lb < kids[0].lb) std::swap(kids[0], kids[1]);
    for (int q = 0; q < count; ++q) {
      const Child& c = kids[q];
      if (prune(c.lb)) continue;
      if (++nodes_ > opts_.node_budget && opts_.node_budget) {
        throw ScopeError("exact solver exceeded its node budget of " + std::to_string(opts_.node_budget) +
                         "; use the convex solver");
      }
      const double oi = col_lb_[static_cast<std::size_t>(i)], oj = col_lb_[static_cast<std::size_t>(j)];
      apply(i, j, c.value);
      col_lb_[static_cast<std::size_t>(i)] = c.bi;
      col_lb_[static_cast<std::size_t>(j)] = c.bj;
      search(p + 1, c.lb);
      col_lb_[static_cast<std::size_t>(i)] = oi;
      col_lb_[static_cast<std::size_t>(j)] = oj;
      undo(i, j, c.value);
    }
  }

  void leaf() {
    std::vector<Edge> edges;
    Matrix A = Matrix::Zero(n_, n_);
    for (const auto& [i, j] : pairs_)
      if (chosen_[at(i, j)]) {
        edges.push_back({i, j});
        A(i, j) = A(j, i) = 1.0;
      }
    const double obj = residual_objective(A, sys_);
    if (!found_ || obj < best_) {
      found_ = true;
      best_ = obj;
      best_edges_ = std::move(edges);
    }
  }

  const TrajectorySystem& sys_;
  ExactOptions opts_;
  int n_;
  Eigen::Index rows_;
  Matrix known_;
  std::vector<Vector> coef_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> need_, slots_;
  std::vector<char> decided_, chosen_;
  std::vector<double> col_lb_;
  std::vector<int> scratch_;
  Vector acc_;
  std::unordered_map<std::uint64_t, double> memo_;
  static constexpr std::size_t kMemoLimit = 1u << 22;
  bool found_ = false;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<Edge> best_edges_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ExactResult solve_exact_detailed(const TrajectorySystem& sys, const ExactOptions& opts) {
  const int n = sys.n();
  const int limit = std::min(opts.n_limit, kMaxExactNodes);
  if (n > limit) {
    throw ScopeError("exact solver handles n <= " + std::to_string(limit) + " (got n = " + std::to_string(n) +
                     "); use the convex solver");
  }
  if (n < 1 || sys.V1.cols() != n || sys.V2.cols() != n || sys.V1.rows() != sys.V2.rows()) {
    throw PreconditionError("exact solve: dimension mismatch");
  }
  if (!is_graphical(sys.degrees)) throw InfeasibleError("degree sequence is not graphical");
  return BranchAndBound(sys, opts).run();
}

Graph solve_exact(const TrajectorySystem& sys, int n_limit) {
  ExactOptions opts;
  opts.n_limit = n_limit;
  return solve_exact_detailed(sys, opts).graph;
}

}  // namespace graphweave
