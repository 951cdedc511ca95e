#pragma once

#include "mlgcp/bench.hpp"
#include "mlgcp/bnc.hpp"
#include "mlgcp/formulations.hpp"
#include "mlgcp/generator.hpp"
#include "mlgcp/graph.hpp"
#include "mlgcp/heuristics.hpp"
#include "mlgcp/instance_io.hpp"
#include "mlgcp/lp.hpp"
#include "mlgcp/oracle.hpp"
#include "mlgcp/random.hpp"
#include "mlgcp/solve.hpp"
