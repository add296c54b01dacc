#pragma once

// Umbrella header.

#include "netreal/errors.hpp"
#include "netreal/graph.hpp"
#include "netreal/realization.hpp"
#include "netreal/compatibility.hpp"
#include "netreal/analysis.hpp"
#include "netreal/transfer.hpp"
#include "netreal/algebra.hpp"
#include "netreal/loops.hpp"
#include "netreal/imc.hpp"
#include "netreal/sim.hpp"
#include "netreal/io.hpp"
#include "netreal/report.hpp"
#include "netreal/fixtures.hpp"
#include "netreal/demos.hpp"
