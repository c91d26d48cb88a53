#pragma once

#include "coalitiond/errors.hpp"
#include "coalitiond/exact.hpp"
#include "coalitiond/game.hpp"
#include "coalitiond/markets.hpp"
#include "coalitiond/metrics.hpp"
#include "coalitiond/network.hpp"
#include "coalitiond/tracking.hpp"
