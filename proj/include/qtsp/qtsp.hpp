#pragma once

#include "qtsp/anneal.hpp"
#include "qtsp/bayes_opt.hpp"
#include "qtsp/bench.hpp"
#include "qtsp/embedding.hpp"
#include "qtsp/error.hpp"
#include "qtsp/qubo.hpp"
#include "qtsp/rng.hpp"
#include "qtsp/rydberg.hpp"
#include "qtsp/samples.hpp"
#include "qtsp/statevector.hpp"
#include "qtsp/tsp.hpp"
#include "qtsp/vqaa.hpp"
#include "qtsp/vqe.hpp"
