#pragma once

// Umbrella header: every public component of the library.

#include "robinbd/errors.hpp"
#include "robinbd/numerics.hpp"
#include "robinbd/model_spaces.hpp"
#include "robinbd/radial_solver.hpp"
#include "robinbd/variational_oracle.hpp"
#include "robinbd/levelsets_h.hpp"
#include "robinbd/symmetrization.hpp"
#include "robinbd/bd_verifier.hpp"
#include "robinbd/io.hpp"
