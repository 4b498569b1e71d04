#pragma once

#include "hfsi/rational.hpp"
#include "hfsi/laurent_poly.hpp"
#include "hfsi/linear_algebra.hpp"
#include "hfsi/flat_geometry.hpp"
#include "hfsi/hesse_frobenius.hpp"
#include "hfsi/potential_solver.hpp"
#include "hfsi/killing.hpp"
#include "hfsi/verify.hpp"
#include "hfsi/catalog.hpp"
