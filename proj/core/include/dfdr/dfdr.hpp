#pragma once

#include "dfdr/count_table.hpp"
#include "dfdr/discrete_tests.hpp"
#include "dfdr/error.hpp"
#include "dfdr/estimators.hpp"
#include "dfdr/fdr.hpp"
#include "dfdr/rng.hpp"
#include "dfdr/serialize.hpp"
#include "dfdr/sim.hpp"
#include "dfdr/tuning.hpp"
