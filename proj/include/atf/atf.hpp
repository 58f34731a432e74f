#pragma once

#include "atf/rational.hpp"
#include "atf/exact_geometry.hpp"
#include "atf/homology.hpp"
#include "atf/reduction.hpp"
#include "atf/packing.hpp"
#include "atf/diagram.hpp"
#include "atf/pipeline.hpp"
#include "atf/generate.hpp"
#include "atf/json_io.hpp"
#include "atf/svg.hpp"
#include "atf/sweep.hpp"
