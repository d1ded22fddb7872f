#include "epf/tree.h"

#include <algorithm>
#include <numeric>

#include "epf/error.h"
#include "epf/random.h"

namespace epf {

double Tree::Predict(const double* row) const {
  int i = 0;
  while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    i = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

int Tree::Depth() const {
  int depth = 0;
  for (const auto& n : nodes) depth = std::max(depth, n.depth);
  return depth;
}

std::size_t Tree::LeafCount() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(),
                    [](const TreeNode& n) { return n.is_leaf(); }));
}

SortedColumns::SortedColumns(const Matrix& x) {
  const auto n = static_cast<std::uint32_t>(x.rows());
  order_.resize(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    auto& ord = order_[static_cast<std::size_t>(f)];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), 0u);
    std::stable_sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
      return x(a, f) < x(b, f);
    });
  }
}

double RegularizedSplitGain(double g_left, double h_left, double g_right,
                            double h_right, double lambda) {
  const double g = g_left + g_right;
  const double h = h_left + h_right;
  return 0.5 * (g_left * g_left / (h_left + lambda) +
                g_right * g_right / (h_right + lambda) - g * g / (h + lambda));
}

bool SplitBeats(double candidate, double incumbent, double scale) {
  return candidate > incumbent + kSplitTieTolerance * scale;
}

double SplitMidpoint(double a, double b) {
  const double m = a + (b - a) * 0.5;
  return (m < b) ? m : a;
}

namespace {

struct WorkItem {
  int node;
  std::size_t begin;
  std::size_t end;
};

struct BestSplit {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, const SortedColumns& sorted,
             std::span<const double> targets,
             std::span<const std::uint32_t> multiplicity,
             std::span<const std::size_t> allowed,
             const TreeBuildOptions& options, Rng* rng)
      : x_(x), targets_(targets), options_(options), rng_(rng) {
    const auto n_rows = static_cast<std::size_t>(x.rows());
    if (targets.size() != n_rows) {
      throw Error(ErrorCode::kLengthMismatch, "tree: one target per row required");
    }
    if (!multiplicity.empty() && multiplicity.size() != n_rows) {
      throw Error(ErrorCode::kLengthMismatch, "tree: multiplicity length mismatch");
    }
    if (allowed.empty()) {
      allowed_.resize(static_cast<std::size_t>(x.cols()));
      std::iota(allowed_.begin(), allowed_.end(), std::size_t{0});
    } else {
      allowed_.assign(allowed.begin(), allowed.end());
      std::sort(allowed_.begin(), allowed_.end());
    }
    if (allowed_.empty()) {
      throw Error(ErrorCode::kEmptyTrainingSet, "tree: no features");
    }
    positions_.resize(allowed_.size());
    for (std::size_t a = 0; a < allowed_.size(); ++a) {
      auto& pos = positions_[a];
      for (std::uint32_t r : sorted.order(allowed_[a])) {
        const std::uint32_t copies = multiplicity.empty() ? 1u : multiplicity[r];
        for (std::uint32_t c = 0; c < copies; ++c) pos.push_back(r);
      }
    }
    if (positions_[0].empty()) {
      throw Error(ErrorCode::kEmptyTrainingSet, "tree: empty training sample");
    }
    goes_left_.assign(n_rows, 0);
    buffer_.resize(positions_[0].size());
  }

  Tree Grow() {
    Tree tree;
    tree.nodes.push_back(TreeNode{});
    std::vector<WorkItem> stack{{0, 0, positions_[0].size()}};
    while (!stack.empty()) {
      const WorkItem item = stack.back();
      stack.pop_back();
      ProcessNode(tree, item, stack);
    }
    return tree;
  }

 private:
  double LeafValue(double sum, double count) const {
    if (options_.criterion == SplitCriterion::kSse) return sum / count;
    // -G / (H + lambda) with G = -sum
    return sum / (count + options_.lambda);
  }

  double Score(double sum_left, double count_left, double sum, double count,
               double parent_term) const {
    const double sum_right = sum - sum_left;
    const double count_right = count - count_left;
    if (options_.criterion == SplitCriterion::kSse) {
      return sum_left * sum_left / count_left +
             sum_right * sum_right / count_right - parent_term;
    }
    const double g_left = -sum_left;
    const double g_right = -sum_right;
    return 0.5 * (g_left * g_left / (count_left + options_.lambda) +
                  g_right * g_right / (count_right + options_.lambda) -
                  parent_term);
  }

  void ProcessNode(Tree& tree, const WorkItem& item,
                   std::vector<WorkItem>& stack) {
    const auto& canonical = positions_[0];
    double sum = 0.0;
    double sum_sq = 0.0;
    double lo = targets_[canonical[item.begin]];
    double hi = lo;
    for (std::size_t i = item.begin; i < item.end; ++i) {
      const double t = targets_[canonical[i]];
      sum += t;
      sum_sq += t * t;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    const double count = static_cast<double>(item.end - item.begin);
    {
      TreeNode& node = tree.nodes[static_cast<std::size_t>(item.node)];
      node.value = LeafValue(sum, count);
      node.n_samples = count;
    }
    const int depth = tree.nodes[static_cast<std::size_t>(item.node)].depth;
    const auto min_leaf = static_cast<std::size_t>(std::max(1, options_.min_samples_leaf));

    if ((options_.max_depth > 0 && depth >= options_.max_depth) ||
        item.end - item.begin < 2 * min_leaf || lo == hi) {
      return;
    }

    const double parent_term =
        options_.criterion == SplitCriterion::kSse
            ? sum * sum / count
            : sum * sum / (count + options_.lambda);  // G^2/(H+l), G = -sum

    BestSplit best;
    for (std::size_t a : CandidateSlots()) {
      const std::size_t f = allowed_[a];
      const auto& pos = positions_[a];
      double sum_left = 0.0;
      for (std::size_t i = item.begin; i + 1 < item.end; ++i) {
        sum_left += targets_[pos[i]];
        const std::size_t n_left = i + 1 - item.begin;
        const std::size_t n_right = item.end - item.begin - n_left;
        if (n_left < min_leaf) continue;
        if (n_right < min_leaf) break;
        const double v = x_(pos[i], static_cast<Eigen::Index>(f));
        const double v_next = x_(pos[i + 1], static_cast<Eigen::Index>(f));
        if (!(v < v_next)) continue;
        const double s = Score(sum_left, static_cast<double>(n_left), sum, count,
                               parent_term);
        if (SplitBeats(s, best.score, sum_sq)) {
          best.feature = static_cast<int>(f);
          best.threshold = SplitMidpoint(v, v_next);
          best.score = s;
        }
      }
    }
    if (best.feature < 0) return;

    // Route rows, then stably partition every feature's range.
    const auto fx = static_cast<Eigen::Index>(best.feature);
    for (std::size_t i = item.begin; i < item.end; ++i) {
      const std::uint32_t r = canonical[i];
      goes_left_[r] = x_(r, fx) <= best.threshold ? 1 : 0;
    }
    std::size_t mid = item.begin;
    for (auto& pos : positions_) {
      std::size_t l = item.begin;
      std::size_t b = 0;
      for (std::size_t i = item.begin; i < item.end; ++i) {
        const std::uint32_t r = pos[i];
        if (goes_left_[r]) {
          pos[l++] = r;
        } else {
          buffer_[b++] = r;
        }
      }
      std::copy(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(b),
                pos.begin() + static_cast<std::ptrdiff_t>(l));
      mid = l;
    }

    const int left = static_cast<int>(tree.nodes.size());
    const int right = left + 1;
    TreeNode child;
    child.depth = depth + 1;
    tree.nodes.push_back(child);
    tree.nodes.push_back(child);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(item.node)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.gain = best.score;
    node.left = left;
    node.right = right;
    stack.push_back({right, mid, item.end});
    stack.push_back({left, item.begin, mid});
  }

  // Slots into allowed_ to scan at this node, ascending.
  std::vector<std::size_t> CandidateSlots() {
    const std::size_t m = allowed_.size();
    const std::size_t k = options_.features_per_split;
    if (k == 0 || k >= m) {
      std::vector<std::size_t> all(m);
      std::iota(all.begin(), all.end(), std::size_t{0});
      return all;
    }
    if (rng_ == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "tree: feature sampling needs an rng");
    }
    return rng_->SampleWithoutReplacement(m, k);
  }

  const Matrix& x_;
  std::span<const double> targets_;
  const TreeBuildOptions& options_;
  Rng* rng_;
  std::vector<std::size_t> allowed_;
  std::vector<std::vector<std::uint32_t>> positions_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> buffer_;
};

}  // namespace

Tree BuildTree(const Matrix& x, const SortedColumns& sorted,
               std::span<const double> targets,
               std::span<const std::uint32_t> multiplicity,
               std::span<const std::size_t> allowed,
               const TreeBuildOptions& options, Rng* rng) {
  if (x.rows() == 0) {
    throw Error(ErrorCode::kEmptyTrainingSet, "tree: no training rows");
  }
  TreeGrower grower(x, sorted, targets, multiplicity, allowed, options, rng);
  return grower.Grow();
}

}  // namespace epf
