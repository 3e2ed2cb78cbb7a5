#pragma once

#include "slplab/birnbaum.hpp"
#include "slplab/demos.hpp"
#include "slplab/evidence.hpp"
#include "slplab/experiment.hpp"
#include "slplab/factorization.hpp"
#include "slplab/likelihood.hpp"
#include "slplab/normal.hpp"
#include "slplab/rational.hpp"
#include "slplab/report.hpp"
#include "slplab/rng.hpp"
#include "slplab/slp.hpp"
#include "slplab/stopping.hpp"
