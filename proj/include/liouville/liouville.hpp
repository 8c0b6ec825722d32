#pragma once

#include "liouville/error.hpp"
#include "liouville/grid.hpp"
#include "liouville/profile.hpp"
#include "liouville/toeplitz.hpp"
#include "liouville/transforms.hpp"
#include "liouville/fixed_point.hpp"
#include "liouville/linearization.hpp"
#include "liouville/solver.hpp"
#include "liouville/continuation.hpp"
#include "liouville/diagnostics.hpp"
#include "liouville/io.hpp"
