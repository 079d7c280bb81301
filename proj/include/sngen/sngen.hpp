#pragma once

#include "sngen/degree_model.hpp"
#include "sngen/edge_sampler.hpp"
#include "sngen/graph.hpp"
#include "sngen/io.hpp"
#include "sngen/metrics.hpp"
#include "sngen/processes.hpp"
#include "sngen/random.hpp"
#include "sngen/rewirer.hpp"
#include "sngen/special.hpp"
