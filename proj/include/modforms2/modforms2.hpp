#pragma once

// Umbrella header: exact q-series of level 1 and 2, the identity engine,
// and the numeric cross-validation layer.

#include "modforms2/catalog.hpp"
#include "modforms2/complex_eval.hpp"
#include "modforms2/eval.hpp"
#include "modforms2/expr.hpp"
#include "modforms2/hyp2f1.hpp"
#include "modforms2/identities.hpp"
#include "modforms2/ode.hpp"
#include "modforms2/rational.hpp"
#include "modforms2/series.hpp"
#include "modforms2/transforms.hpp"
