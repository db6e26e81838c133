#ifndef SETBRANCH_SETBRANCH_HPP
#define SETBRANCH_SETBRANCH_HPP

#include "setbranch/bench.hpp"
#include "setbranch/branching.hpp"
#include "setbranch/clustering.hpp"
#include "setbranch/errors.hpp"
#include "setbranch/expr.hpp"
#include "setbranch/generators.hpp"
#include "setbranch/heuristics.hpp"
#include "setbranch/instance_io.hpp"
#include "setbranch/model.hpp"
#include "setbranch/prng.hpp"
#include "setbranch/propagation.hpp"
#include "setbranch/records.hpp"
#include "setbranch/search.hpp"
#include "setbranch/state.hpp"
#include "setbranch/stats.hpp"

#endif
