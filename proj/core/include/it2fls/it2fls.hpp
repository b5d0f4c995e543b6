#pragma once

#include "it2fls/adam.hpp"
#include "it2fls/data.hpp"
#include "it2fls/fuzzification.hpp"
#include "it2fls/gradient.hpp"
#include "it2fls/inference.hpp"
#include "it2fls/losses.hpp"
#include "it2fls/metrics.hpp"
#include "it2fls/model.hpp"
#include "it2fls/trainer.hpp"
#include "it2fls/types.hpp"
