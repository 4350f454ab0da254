#pragma once

#include "tfpp/caputo.hpp"
#include "tfpp/config.hpp"
#include "tfpp/csv.hpp"
#include "tfpp/errors.hpp"
#include "tfpp/experiments.hpp"
#include "tfpp/expr.hpp"
#include "tfpp/fd_solver.hpp"
#include "tfpp/grid.hpp"
#include "tfpp/inverse.hpp"
#include "tfpp/mittag_leffler.hpp"
#include "tfpp/parallel.hpp"
#include "tfpp/problem.hpp"
#include "tfpp/quadrature.hpp"
#include "tfpp/report.hpp"
#include "tfpp/spectral.hpp"
#include "tfpp/time_mesh.hpp"
