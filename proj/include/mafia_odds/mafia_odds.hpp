#pragma once

#include "core.hpp"
#include "evolution.hpp"
#include "montecarlo.hpp"
#include "winchance.hpp"
