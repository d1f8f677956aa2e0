// Umbrella header.
#pragma once

#include "semicop/association.hpp"
#include "semicop/basis.hpp"
#include "semicop/csv.hpp"
#include "semicop/experiment.hpp"
#include "semicop/fitter.hpp"
#include "semicop/generator.hpp"
#include "semicop/qp.hpp"
#include "semicop/quadrature.hpp"
#include "semicop/regions.hpp"
#include "semicop/rng.hpp"
#include "semicop/sampler.hpp"
