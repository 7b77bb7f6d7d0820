#pragma once

#include "chainent/analysis.hpp"
#include "chainent/correlations.hpp"
#include "chainent/entropy.hpp"
#include "chainent/error.hpp"
#include "chainent/model.hpp"
#include "chainent/oracle.hpp"
#include "chainent/spectral.hpp"
