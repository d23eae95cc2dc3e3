#pragma once

#include "setmax/analysis.hpp"
#include "setmax/attack.hpp"
#include "setmax/bench.hpp"
#include "setmax/constraint.hpp"
#include "setmax/corpus_io.hpp"
#include "setmax/generator.hpp"
#include "setmax/local_search.hpp"
#include "setmax/oracle.hpp"
#include "setmax/population.hpp"
#include "setmax/rng.hpp"
#include "setmax/subset.hpp"
