// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/image_io.hpp"
#include "polardem/mosaic.hpp"
#include "polardem/lattice.hpp"
#include "polardem/eari.hpp"
#include "polardem/ri.hpp"
#include "polardem/baselines.hpp"
#include "polardem/cpfa.hpp"
#include "polardem/polar.hpp"
#include "polardem/viz.hpp"
#include "polardem/synth.hpp"
#include "polardem/bench.hpp"
