#pragma once

// Umbrella header for the differential-information market engine and the
// token-economy simulator.

#include "dime/clearing.hpp"
#include "dime/config.hpp"
#include "dime/economy.hpp"
#include "dime/equilibrium.hpp"
#include "dime/error.hpp"
#include "dime/fees.hpp"
#include "dime/gaussian.hpp"
#include "dime/ledger.hpp"
#include "dime/market.hpp"
#include "dime/pool.hpp"
#include "dime/rng.hpp"
#include "dime/runner.hpp"
#include "dime/scenario.hpp"
#include "dime/study.hpp"
#include "dime/table.hpp"
#include "dime/units.hpp"
#include "dime/vault.hpp"
