#pragma once

#include "rumor/boundary_analysis.hpp"
#include "rumor/edge_list.hpp"
#include "rumor/error.hpp"
#include "rumor/expansion.hpp"
#include "rumor/experiment.hpp"
#include "rumor/generators.hpp"
#include "rumor/graph.hpp"
#include "rumor/json_io.hpp"
#include "rumor/node_set.hpp"
#include "rumor/parallel.hpp"
#include "rumor/protocol.hpp"
#include "rumor/random.hpp"
#include "rumor/rational.hpp"
#include "rumor/stats.hpp"
#include "rumor/version.hpp"
