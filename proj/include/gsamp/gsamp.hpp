#pragma once

#include "gsamp/hilbert_core.hpp"
#include "gsamp/cyclic_sampling.hpp"
#include "gsamp/laurent.hpp"
#include "gsamp/spectral.hpp"
#include "gsamp/lca_finite.hpp"
