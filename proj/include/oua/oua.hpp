#ifndef OUA_OUA_HPP
#define OUA_OUA_HPP

#include "oua/algebra.hpp"
#include "oua/checks.hpp"
#include "oua/composition.hpp"
#include "oua/derivations.hpp"
#include "oua/dyncorr.hpp"
#include "oua/errors.hpp"
#include "oua/lie_classify.hpp"
#include "oua/logic.hpp"
#include "oua/rng.hpp"
#include "oua/serialization.hpp"
#include "oua/spectral.hpp"
#include "oua/star_algebra.hpp"
#include "oua/version.hpp"

#endif  // OUA_OUA_HPP
