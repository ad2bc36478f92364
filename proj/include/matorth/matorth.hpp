#pragma once

#include "matorth/errors.hpp"
#include "matorth/numkernel.hpp"
#include "matorth/matpoly.hpp"
#include "matorth/diffop.hpp"
#include "matorth/weights.hpp"
#include "matorth/quadrature.hpp"
#include "matorth/orthopoly.hpp"
#include "matorth/symmetry.hpp"
#include "matorth/catalog.hpp"
#include "matorth/cone.hpp"
