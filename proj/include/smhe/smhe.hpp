#pragma once

// Umbrella header: the full masked multi-key BFV/CKKS stack plus the
// federated-aggregation simulator and wire format.

#include "smhe/ring.hpp"
#include "smhe/gadget.hpp"
#include "smhe/keys.hpp"
#include "smhe/masking.hpp"
#include "smhe/evaluator.hpp"
#include "smhe/io.hpp"
#include "smhe/ppfl.hpp"
