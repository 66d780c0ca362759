#pragma once

// Everything except io.hpp, which needs the vendored json header.

#include "ballbody/acceptance.hpp"
#include "ballbody/body.hpp"
#include "ballbody/error.hpp"
#include "ballbody/geometry.hpp"
#include "ballbody/isometry.hpp"
#include "ballbody/planar.hpp"
#include "ballbody/random.hpp"
#include "ballbody/raster.hpp"
