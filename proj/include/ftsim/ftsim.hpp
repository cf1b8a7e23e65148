#pragma once

#include <ftsim/clustering.hpp>
#include <ftsim/dag.hpp>
#include <ftsim/device.hpp>
#include <ftsim/engine.hpp>
#include <ftsim/error.hpp>
#include <ftsim/experiment.hpp>
#include <ftsim/ids.hpp>
#include <ftsim/policy.hpp>
#include <ftsim/rng.hpp>
#include <ftsim/timing.hpp>
#include <ftsim/workload.hpp>
