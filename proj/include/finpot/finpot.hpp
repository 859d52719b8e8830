#pragma once

#include "finpot/errors.hpp"
#include "finpot/rational.hpp"
#include "finpot/polynomial.hpp"
#include "finpot/matrix.hpp"
#include "finpot/number_field.hpp"
#include "finpot/laurent_series.hpp"
#include "finpot/rational_function.hpp"
#include "finpot/factor.hpp"
#include "finpot/operator.hpp"
#include "finpot/ast.hpp"
#include "finpot/determinant.hpp"
#include "finpot/exponential.hpp"
#include "finpot/residue.hpp"
#include "finpot/segal_wilson.hpp"
