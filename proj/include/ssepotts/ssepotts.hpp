#pragma once

#include "cluster.hpp"
#include "errors.hpp"
#include "exact_conductance.hpp"
#include "expansion.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "ground_state.hpp"
#include "logmath.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "partition.hpp"
#include "polymer.hpp"
#include "potts.hpp"
#include "rational.hpp"
#include "spectrum.hpp"
#include "sweep.hpp"
