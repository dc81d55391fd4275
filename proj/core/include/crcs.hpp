#pragma once

#include "crcs/estimators.hpp"
#include "crcs/inference.hpp"
#include "crcs/io.hpp"
#include "crcs/isotonic.hpp"
#include "crcs/parallel.hpp"
#include "crcs/regularity.hpp"
#include "crcs/report.hpp"
#include "crcs/simulation.hpp"
#include "crcs/special.hpp"
#include "crcs/tally.hpp"
#include "crcs/types.hpp"
