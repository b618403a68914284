#pragma once

// Umbrella header: the full attack engine, oracles and experiment harness.

#include "evoshape/attack.hpp"
#include "evoshape/cifar10.hpp"
#include "evoshape/config.hpp"
#include "evoshape/experiment.hpp"
#include "evoshape/genome.hpp"
#include "evoshape/image.hpp"
#include "evoshape/objective.hpp"
#include "evoshape/oracle.hpp"
#include "evoshape/png_io.hpp"
#include "evoshape/probability.hpp"
#include "evoshape/raster.hpp"
#include "evoshape/reconstruct.hpp"
#include "evoshape/record.hpp"
#include "evoshape/remote_oracle.hpp"
#include "evoshape/rng.hpp"
#include "evoshape/serialize.hpp"
#include "evoshape/wire.hpp"
