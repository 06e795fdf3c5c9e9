#pragma once

/**
 * Umbrella header: numerical laboratory for radial contact Hamiltonian
 * flows on spheres and lens-space quotients, translated-point spectra,
 * continuity-tracked spectral selectors, displacement energy and the
 * ladder non-squeezing arithmetic.
 */

#include "contactlab/capacity.hpp"
#include "contactlab/core.hpp"
#include "contactlab/darboux.hpp"
#include "contactlab/displacement.hpp"
#include "contactlab/flow.hpp"
#include "contactlab/hamiltonian.hpp"
#include "contactlab/io.hpp"
#include "contactlab/product.hpp"
#include "contactlab/profiles.hpp"
#include "contactlab/selector.hpp"
#include "contactlab/spaces.hpp"
#include "contactlab/spectrum.hpp"
