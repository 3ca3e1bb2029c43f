#pragma once

/// Umbrella header: Bayesian unit root testing for zero-mean AR(1) series.

#include "unitroot/bic.hpp"
#include "unitroot/data_io.hpp"
#include "unitroot/df.hpp"
#include "unitroot/errors.hpp"
#include "unitroot/evidence.hpp"
#include "unitroot/mc.hpp"
#include "unitroot/oracle.hpp"
#include "unitroot/phillips.hpp"
#include "unitroot/quadrature.hpp"
#include "unitroot/rng.hpp"
#include "unitroot/series.hpp"
#include "unitroot/special.hpp"
#include "unitroot/svd.hpp"

namespace unitroot {
inline constexpr const char* kVersion = "0.1.0";
}
