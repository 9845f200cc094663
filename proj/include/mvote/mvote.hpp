#pragma once

#include "mvote/boundary.hpp"
#include "mvote/bounds.hpp"
#include "mvote/config.hpp"
#include "mvote/geometry.hpp"
#include "mvote/harness.hpp"
#include "mvote/neighborhood.hpp"
#include "mvote/render.hpp"
#include "mvote/rng.hpp"
#include "mvote/sampling.hpp"
#include "mvote/vote.hpp"
