#pragma once

#include "analysis.hpp"
#include "checkpoint.hpp"
#include "dfe.hpp"
#include "errors.hpp"
#include "filters.hpp"
#include "int128.hpp"
#include "modarith.hpp"
#include "mode.hpp"
#include "moduli.hpp"
#include "primes.hpp"
#include "records.hpp"
#include "search.hpp"
#include "verify.hpp"
#include "wheel.hpp"
