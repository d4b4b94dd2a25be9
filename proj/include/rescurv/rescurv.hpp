#pragma once

#include "rescurv/curvature.hpp"
#include "rescurv/erg.hpp"
#include "rescurv/experiments.hpp"
#include "rescurv/flow.hpp"
#include "rescurv/generators.hpp"
#include "rescurv/graph.hpp"
#include "rescurv/io.hpp"
#include "rescurv/reference.hpp"
#include "rescurv/resistance.hpp"
#include "rescurv/rng.hpp"
#include "rescurv/spanning_trees.hpp"
#include "rescurv/stats.hpp"
