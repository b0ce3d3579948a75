#pragma once

// Umbrella header.

#include "susy/core.hpp"
#include "susy/stencil.hpp"
#include "susy/jet.hpp"
#include "susy/elliptic.hpp"
#include "susy/seeds.hpp"
#include "susy/chain.hpp"
#include "susy/wronskian.hpp"
#include "susy/transform.hpp"
#include "susy/spectral.hpp"
#include "susy/config.hpp"
#include "susy/commands.hpp"
