#pragma once

#include "vbifem/config.hpp"
#include "vbifem/cpd.hpp"
#include "vbifem/elasticity.hpp"
#include "vbifem/error.hpp"
#include "vbifem/forward.hpp"
#include "vbifem/mesh.hpp"
#include "vbifem/mesh_io.hpp"
#include "vbifem/metrics.hpp"
#include "vbifem/probabilistic.hpp"
#include "vbifem/simplex.hpp"
#include "vbifem/solver.hpp"
#include "vbifem/sparse.hpp"
