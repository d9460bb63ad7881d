#pragma once

#include "core.hpp"
#include "space.hpp"
#include "barrier.hpp"
#include "chainrel.hpp"
#include "lyapunov.hpp"
#include "attractor.hpp"
#include "mixing.hpp"
#include "mane.hpp"
#include "models.hpp"
#include "io.hpp"
