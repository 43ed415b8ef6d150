#pragma once

#include "homfill/builders.hpp"
#include "homfill/chain.hpp"
#include "homfill/connectivity.hpp"
#include "homfill/equivariance.hpp"
#include "homfill/error.hpp"
#include "homfill/filling.hpp"
#include "homfill/fixtures.hpp"
#include "homfill/format.hpp"
#include "homfill/fv.hpp"
#include "homfill/smith.hpp"
