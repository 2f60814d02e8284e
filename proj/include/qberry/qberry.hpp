#pragma once

#include "qberry/berry.hpp"
#include "qberry/circuit.hpp"
#include "qberry/entangle.hpp"
#include "qberry/errors.hpp"
#include "qberry/gates.hpp"
#include "qberry/noise.hpp"
#include "qberry/rabi.hpp"
#include "qberry/state.hpp"
