#ifndef EPF_TESTS_FIXTURES_H_
#define EPF_TESTS_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "epf/linalg.h"
#include "epf/regressors.h"
#include "oracles/oracles.h"

namespace epf::testing {

inline Matrix RandomMatrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                           double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = u(gen);
  return x;
}

inline Vector Noise(Eigen::Index n, double sigma, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(gen);
  return v;
}

inline double Mse(const Vector& a, const Vector& b) {
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

// Counts nodes where the fitted tree and the brute-force oracle disagree on
// the split (feature, threshold) or on being a leaf. Near-ties in the oracle
// accept either choice but are counted in `near_ties`.
inline int CompareWithOracle(const Tree& tree, int index, const oracle::OracleNode& o,
                             int& near_ties) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
  if (o.feature < 0 || node.is_leaf()) {
    return (o.feature < 0) == node.is_leaf() ? 0 : 1;
  }
  if (o.near_tie) {
    ++near_ties;
    return 0;
  }
  int bad = 0;
  if (node.feature != o.feature || std::abs(node.threshold - o.threshold) > 1e-12) ++bad;
  if (bad) return bad;
  return CompareWithOracle(tree, node.left, *o.left, near_ties) +
         CompareWithOracle(tree, node.right, *o.right, near_ties);
}

inline std::filesystem::path SourceDir() { return EPF_SOURCE_DIR; }

inline std::filesystem::path ScratchDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("epf_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace epf::testing

#endif  // EPF_TESTS_FIXTURES_H_
