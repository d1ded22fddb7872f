#ifndef EPF_TREE_H_
#define EPF_TREE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "epf/linalg.h"

namespace epf {

class Rng;

// A node is a leaf when feature < 0. Splits send x[feature] <= threshold to
// the left child and everything else to the right.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;      // leaf output (also kept on internal nodes)
  double n_samples = 0.0;  // training samples reaching the node
  double gain = 0.0;       // split score of the chosen split
  int depth = 0;           // root = 0

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double Predict(const double* row) const;
  // Deepest node depth (root only = 0).
  int Depth() const;
  std::size_t LeafCount() const;
};

enum class SplitCriterion {
  // Sum-of-squares reduction S_L^2/n_L + S_R^2/n_R - S^2/n; leaf = mean.
  kSse,
  // 1/2 [G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l)] with G = -sum of
  // residuals and H = count; leaf = -G/(H+l).
  kRegularizedGain,
};

enum class FeatureSampling { kPerSplit, kPerTree };

struct TreeBuildOptions {
  SplitCriterion criterion = SplitCriterion::kSse;
  int max_depth = 0;  // 0 = unlimited
  int min_samples_leaf = 1;
  double lambda = 0.0;  // kRegularizedGain only
  // Candidate features drawn per split; 0 = all allowed features.
  std::size_t features_per_split = 0;
};

// Row order of every feature column sorted by value, ties by row index.
// Computed once per training matrix and shared by all trees grown on it.
class SortedColumns {
 public:
  explicit SortedColumns(const Matrix& x);
  const std::vector<std::uint32_t>& order(std::size_t feature) const {
    return order_[feature];
  }
  std::size_t feature_count() const { return order_.size(); }

 private:
  std::vector<std::vector<std::uint32_t>> order_;
};

// Greedy depth-first tree growth.
//   targets        one value per row of x (y for CART, residuals for boosting)
//   multiplicity   copies of each row in the sample (bootstrap / subsample);
//                  empty means every row once
//   allowed        feature indices that may be used; empty means all
//   rng            needed only when options.features_per_split > 0
// Among equally good splits the lowest feature index and then the smallest
// threshold win. Candidate thresholds are midpoints between consecutive
// distinct values.
Tree BuildTree(const Matrix& x, const SortedColumns& sorted,
               std::span<const double> targets,
               std::span<const std::uint32_t> multiplicity,
               std::span<const std::size_t> allowed,
               const TreeBuildOptions& options, Rng* rng);

double RegularizedSplitGain(double g_left, double h_left, double g_right,
                            double h_right, double lambda);

// Midpoint of a < b that still satisfies a <= m < b.
double SplitMidpoint(double a, double b);

// Split scores closer than kSplitTieTolerance * scale count as equal, where
// scale is the node's sum of squared targets (an upper bound on every term of
// the score). Rounding in the score's cancellation then cannot override the
// lowest-feature, smallest-threshold tie rule.
inline constexpr double kSplitTieTolerance = 1e-12;
bool SplitBeats(double candidate, double incumbent, double scale);

}  // namespace epf

#endif  // EPF_TREE_H_
