#ifndef BRNAGG_BRNAGG_HPP
#define BRNAGG_BRNAGG_HPP

#include "brnagg/aggregators.hpp"
#include "brnagg/belief.hpp"
#include "brnagg/curve.hpp"
#include "brnagg/dataset_io.hpp"
#include "brnagg/empirical.hpp"
#include "brnagg/errors.hpp"
#include "brnagg/lower_bound.hpp"
#include "brnagg/nelder_mead.hpp"
#include "brnagg/regret.hpp"
#include "brnagg/study.hpp"

#endif  // BRNAGG_BRNAGG_HPP
