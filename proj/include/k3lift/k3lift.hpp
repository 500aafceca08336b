#pragma once

#include "k3lift/arith.hpp"
#include "k3lift/crystal_family.hpp"
#include "k3lift/errors.hpp"
#include "k3lift/hensel.hpp"
#include "k3lift/int_lattice.hpp"
#include "k3lift/isometry.hpp"
#include "k3lift/lattice.hpp"
#include "k3lift/lift_search.hpp"
#include "k3lift/matrix.hpp"
#include "k3lift/padic.hpp"
#include "k3lift/period_domain.hpp"
