#pragma once

// Umbrella header.

#include "dioph/arithmetic.hpp"
#include "dioph/decomp.hpp"
#include "dioph/enumeration.hpp"
#include "dioph/equation.hpp"
#include "dioph/families.hpp"
#include "dioph/nat.hpp"
#include "dioph/serialize.hpp"
#include "dioph/stress.hpp"
