#pragma once

// Umbrella header: the whole public surface.

#include "errors.hpp"
#include "rational.hpp"
#include "monomial.hpp"
#include "variables.hpp"
#include "fields.hpp"
#include "rng.hpp"
#include "polynomial.hpp"
#include "matrix.hpp"
#include "gcd.hpp"
#include "text_io.hpp"
#include "chow.hpp"
#include "decomposition.hpp"
#include "modp.hpp"
#include "bounds.hpp"
