#pragma once

#include "trisub/bench.hpp"
#include "trisub/io.hpp"
#include "trisub/mesh.hpp"
#include "trisub/metrics.hpp"
#include "trisub/shapes.hpp"
#include "trisub/subdivide.hpp"
