#pragma once

#include "rdbound/family_categorical.hpp"
#include "rdbound/family_gaussian.hpp"
#include "rdbound/family_multinomial.hpp"
#include "rdbound/family_zero_error.hpp"
#include "rdbound/knn_entropy.hpp"
#include "rdbound/loss_order.hpp"
#include "rdbound/monte_carlo.hpp"
#include "rdbound/rd_core.hpp"
#include "rdbound/rng.hpp"
#include "rdbound/sim_common.hpp"
#include "rdbound/specfun.hpp"
