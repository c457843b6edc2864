#pragma once

#include "se2n/errors.hpp"
#include "se2n/grid.hpp"
#include "se2n/parallel.hpp"
#include "se2n/bessel.hpp"
#include "se2n/dft.hpp"
#include "se2n/transform.hpp"
#include "se2n/solve.hpp"
#include "se2n/array_io.hpp"
#include "se2n/repr.hpp"
#include "se2n/harness.hpp"
#include "se2n/image.hpp"
