#pragma once

#include "experiments.hpp"
#include "field.hpp"
#include "fvem.hpp"
#include "io.hpp"
#include "mesh.hpp"
#include "physics.hpp"
#include "solver.hpp"
#include "stepper.hpp"
#include "types.hpp"
