#pragma once

#include "sabres/rng.hpp"
#include "sabres/benchmarks.hpp"
#include "sabres/trace.hpp"
#include "sabres/engine.hpp"
#include "sabres/harness.hpp"
