#pragma once

#include "mbpi/asymptotics.hpp"
#include "mbpi/intensities.hpp"
#include "mbpi/invariant.hpp"
#include "mbpi/kolmogorov.hpp"
#include "mbpi/lemmas.hpp"
#include "mbpi/montecarlo.hpp"
#include "mbpi/ode.hpp"
#include "mbpi/process.hpp"
#include "mbpi/quadrature.hpp"
#include "mbpi/series.hpp"
#include "mbpi/slowly_varying.hpp"
