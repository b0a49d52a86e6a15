#pragma once

#include "hardylab/common.hpp"
#include "hardylab/hardy_core.hpp"
#include "hardylab/polynomial.hpp"
#include "hardylab/linalg.hpp"
#include "hardylab/inner_outer.hpp"
#include "hardylab/operator_matrix.hpp"
#include "hardylab/model_ops.hpp"
#include "hardylab/theta_models.hpp"
#include "hardylab/presets.hpp"
#include "hardylab/report.hpp"
#include "hardylab/probes.hpp"
#include "hardylab/parallel.hpp"
#include "hardylab/serialize.hpp"
#include "hardylab/runner.hpp"
