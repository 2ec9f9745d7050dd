#ifndef QHPM_QHPM_HPP_
#define QHPM_QHPM_HPP_

#include "qhpm/analysis.hpp"
#include "qhpm/embedding.hpp"
#include "qhpm/error.hpp"
#include "qhpm/format.hpp"
#include "qhpm/homotopy.hpp"
#include "qhpm/linalg.hpp"
#include "qhpm/linear_solver.hpp"
#include "qhpm/newton.hpp"
#include "qhpm/pipeline.hpp"
#include "qhpm/problem_io.hpp"
#include "qhpm/quadratic_system.hpp"

#endif  // QHPM_QHPM_HPP_
