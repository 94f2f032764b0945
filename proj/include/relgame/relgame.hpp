#pragma once

#include "relgame/caps.hpp"
#include "relgame/coalition.hpp"
#include "relgame/core.hpp"
#include "relgame/errors.hpp"
#include "relgame/games.hpp"
#include "relgame/lp.hpp"
#include "relgame/netgame.hpp"
#include "relgame/random.hpp"
#include "relgame/reliability.hpp"
#include "relgame/shapley.hpp"
