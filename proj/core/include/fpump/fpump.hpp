#pragma once

#include "fpump/bench.hpp"
#include "fpump/certificate.hpp"
#include "fpump/errors.hpp"
#include "fpump/formats.hpp"
#include "fpump/gen.hpp"
#include "fpump/lp.hpp"
#include "fpump/model.hpp"
#include "fpump/perturb.hpp"
#include "fpump/projection.hpp"
#include "fpump/pump.hpp"
#include "fpump/rng.hpp"
