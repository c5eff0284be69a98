#pragma once

#include "etalab/numeric.hpp"
#include "etalab/special.hpp"
#include "etalab/geometry.hpp"
#include "etalab/kernel.hpp"
#include "etalab/expansion.hpp"
#include "etalab/eta.hpp"
#include "etalab/interval.hpp"
