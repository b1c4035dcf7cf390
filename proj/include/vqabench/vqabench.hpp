#pragma once

#include "vqabench/cli.hpp"
#include "vqabench/distribution.hpp"
#include "vqabench/harness.hpp"
#include "vqabench/io.hpp"
#include "vqabench/ising.hpp"
#include "vqabench/optimize.hpp"
#include "vqabench/parallel.hpp"
#include "vqabench/rng.hpp"
#include "vqabench/simulator.hpp"
#include "vqabench/stopping.hpp"
#include "vqabench/svg.hpp"
