#pragma once

#include "isorabi/blocks.hpp"
#include "isorabi/constants.hpp"
#include "isorabi/errors.hpp"
#include "isorabi/fuchsia.hpp"
#include "isorabi/oracle.hpp"
#include "isorabi/partition.hpp"
#include "isorabi/rabi.hpp"
#include "isorabi/rabi_params.hpp"
#include "isorabi/tau.hpp"
