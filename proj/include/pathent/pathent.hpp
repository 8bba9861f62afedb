#pragma once

// Umbrella header for the numerical library (the CLI lives in cli.hpp).

#include <pathent/continuous.hpp>
#include <pathent/discrete.hpp>
#include <pathent/divergence.hpp>
#include <pathent/error.hpp>
#include <pathent/maxent.hpp>
#include <pathent/numeric.hpp>
#include <pathent/ode.hpp>
#include <pathent/pathway.hpp>
#include <pathent/ppp.hpp>
#include <pathent/quadrature.hpp>
