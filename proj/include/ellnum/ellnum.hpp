// Umbrella header.
#pragma once

#define ELLNUM_VERSION "1.0.0"

#include "ellnum/arith.hpp"
#include "ellnum/curve.hpp"
#include "ellnum/eq_search.hpp"
#include "ellnum/modarith.hpp"
#include "ellnum/np_table.hpp"
#include "ellnum/point_count.hpp"
#include "ellnum/stats.hpp"
