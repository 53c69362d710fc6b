#pragma once

// State-space compression toolkit: exact evaluation and optimization of
// compression triples (pi, phi, rho) for finite Markov systems, plus
// Monte Carlo cross-checks.

#include "ssc/accuracy.hpp"
#include "ssc/computation.hpp"
#include "ssc/corpus.hpp"
#include "ssc/info.hpp"
#include "ssc/matrix.hpp"
#include "ssc/measures.hpp"
#include "ssc/model.hpp"
#include "ssc/montecarlo.hpp"
#include "ssc/optimize.hpp"
#include "ssc/partition.hpp"
#include "ssc/propagation.hpp"
#include "ssc/rng.hpp"
