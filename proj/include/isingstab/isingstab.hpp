#pragma once

#include "isingstab/bounds.hpp"
#include "isingstab/compression.hpp"
#include "isingstab/errors.hpp"
#include "isingstab/graph.hpp"
#include "isingstab/hamiltonian.hpp"
#include "isingstab/montecarlo.hpp"
#include "isingstab/perturbation.hpp"
#include "isingstab/random.hpp"
#include "isingstab/solvers.hpp"
#include "isingstab/special_functions.hpp"
