#pragma once

#include "eigenvi/basis1d.hpp"
#include "eigenvi/cdf_table.hpp"
#include "eigenvi/density.hpp"
#include "eigenvi/errors.hpp"
#include "eigenvi/estimator.hpp"
#include "eigenvi/moments.hpp"
#include "eigenvi/product_basis.hpp"
#include "eigenvi/proposals.hpp"
#include "eigenvi/quadrature.hpp"
#include "eigenvi/random.hpp"
#include "eigenvi/sampling.hpp"
#include "eigenvi/score_target.hpp"
#include "eigenvi/serialization.hpp"
#include "eigenvi/standardize.hpp"
#include "eigenvi/targets.hpp"
#include "eigenvi/transform.hpp"
#include "eigenvi/weight_vector.hpp"
