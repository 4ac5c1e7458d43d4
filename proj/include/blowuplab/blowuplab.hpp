#pragma once

// Umbrella header for the whole library.

#include "blowuplab/divdiff.hpp"
#include "blowuplab/errors.hpp"
#include "blowuplab/io.hpp"
#include "blowuplab/numeric.hpp"
#include "blowuplab/ode.hpp"
#include "blowuplab/partial_fractions.hpp"
#include "blowuplab/quadrature.hpp"
#include "blowuplab/rng.hpp"
#include "blowuplab/verify.hpp"
#include "blowuplab/weights.hpp"
