#pragma once

#include "gnnkit/error.hpp"
#include "gnnkit/random.hpp"
#include "gnnkit/matrix.hpp"
#include "gnnkit/gradcheck.hpp"
#include "gnnkit/graph.hpp"
#include "gnnkit/spectral.hpp"
#include "gnnkit/autograd.hpp"
#include "gnnkit/layers.hpp"
#include "gnnkit/losses.hpp"
#include "gnnkit/optim.hpp"
#include "gnnkit/autoencoder.hpp"
#include "gnnkit/metrics.hpp"
#include "gnnkit/data.hpp"
#include "gnnkit/training.hpp"
