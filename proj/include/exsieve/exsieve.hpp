#pragma once

#include "exsieve/arith.hpp"
#include "exsieve/errors.hpp"
#include "exsieve/exceptional_scan.hpp"
#include "exsieve/legendre.hpp"
#include "exsieve/pair_counts.hpp"
#include "exsieve/prime_table.hpp"
#include "exsieve/properties.hpp"
#include "exsieve/sieve_function.hpp"
#include "exsieve/singular_series.hpp"
