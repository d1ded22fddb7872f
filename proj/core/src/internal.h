#ifndef EPF_SRC_INTERNAL_H_
#define EPF_SRC_INTERNAL_H_

#include "epf/regressors.h"

namespace epf {

double SvrPredictOne(const SvrState& state, double gamma, const double* row);

}  // namespace epf

#endif  // EPF_SRC_INTERNAL_H_
