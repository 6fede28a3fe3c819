#pragma once

#include "downcore/error.hpp"
#include "downcore/random.hpp"
#include "downcore/core_space.hpp"
#include "downcore/halfline.hpp"
#include "downcore/transfer.hpp"
#include "downcore/constructions.hpp"
#include "downcore/norms.hpp"
#include "downcore/kfunc.hpp"
#include "downcore/oracle.hpp"
#include "downcore/instance.hpp"
