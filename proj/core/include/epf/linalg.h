#ifndef EPF_LINALG_H_
#define EPF_LINALG_H_

#include <Eigen/Dense>

namespace epf {

// Rows are observations. Row-major so a feature row is contiguous.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Select rows by index; indices may repeat.
template <typename IndexRange>
Matrix TakeRows(const Matrix& x, const IndexRange& rows) {
  Matrix out(static_cast<Eigen::Index>(std::size(rows)), x.cols());
  Eigen::Index r = 0;
  for (auto i : rows) out.row(r++) = x.row(static_cast<Eigen::Index>(i));
  return out;
}

template <typename IndexRange>
Vector TakeRows(const Vector& v, const IndexRange& rows) {
  Vector out(static_cast<Eigen::Index>(std::size(rows)));
  Eigen::Index r = 0;
  for (auto i : rows) out(r++) = v(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace epf

#endif  // EPF_LINALG_H_
