#pragma once

#include "ptsym/error.hpp"
#include "ptsym/types.hpp"
#include "ptsym/linalg.hpp"
#include "ptsym/pt_structure.hpp"
#include "ptsym/canonical.hpp"
#include "ptsym/metric.hpp"
#include "ptsym/dynamics.hpp"
#include "ptsym/superposition.hpp"
#include "ptsym/bender.hpp"
#include "ptsym/dilation.hpp"
