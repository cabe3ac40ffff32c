#pragma once

// Multivalued AGM: sign-scheduled EAGM, reference values, cloud enumeration,
// lattice fits and the MAGM.

#include "complex_core.hpp"
#include "engine.hpp"
#include "enumerator.hpp"
#include "lattice.hpp"
#include "magm.hpp"
#include "reference.hpp"
