#pragma once

#include "params.hpp"
#include "covariance.hpp"
#include "toeplitz.hpp"
#include "rng.hpp"
#include "simulation.hpp"
#include "estimation.hpp"
#include "asymptotics.hpp"
#include "parallel.hpp"
