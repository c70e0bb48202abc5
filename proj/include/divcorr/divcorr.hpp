#pragma once

#include "divcorr/arith.hpp"
#include "divcorr/constants.hpp"
#include "divcorr/correlate.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/harness.hpp"
#include "divcorr/int128.hpp"
#include "divcorr/multiplicative.hpp"
#include "divcorr/sieve.hpp"
#include "divcorr/table_io.hpp"
#include "divcorr/tau.hpp"
