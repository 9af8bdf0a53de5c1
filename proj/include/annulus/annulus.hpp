#pragma once

#include "annulus/error.hpp"
#include "annulus/rng.hpp"
#include "annulus/linalg.hpp"
#include "annulus/rational.hpp"
#include "annulus/laurent.hpp"
#include "annulus/calculus.hpp"
#include "annulus/classes.hpp"
#include "annulus/unitary.hpp"
#include "annulus/dilation.hpp"
#include "annulus/generators.hpp"
#include "annulus/io.hpp"
#include "annulus/invariants.hpp"
