#ifndef LATZETA_LATZETA_HPP
#define LATZETA_LATZETA_HPP

#include "latzeta/core.hpp"
#include "latzeta/epstein.hpp"
#include "latzeta/lattice.hpp"
#include "latzeta/opreg.hpp"
#include "latzeta/physics.hpp"
#include "latzeta/specfun.hpp"
#include "latzeta/spectral.hpp"
#include "latzeta/truncated.hpp"

#endif  // LATZETA_LATZETA_HPP
