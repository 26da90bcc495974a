#pragma once

#include "lqn/types.hpp"
#include "lqn/network.hpp"
#include "lqn/graphs.hpp"
#include "lqn/state.hpp"
#include "lqn/entanglement.hpp"
#include "lqn/designers.hpp"
#include "lqn/io.hpp"
