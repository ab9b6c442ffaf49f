#pragma once

#include "lbridge/conversion.hpp"
#include "lbridge/engine.hpp"
#include "lbridge/errors.hpp"
#include "lbridge/object.hpp"
#include "lbridge/refbridge.hpp"
#include "lbridge/serialization.hpp"
#include "lbridge/syntax.hpp"
#include "lbridge/term.hpp"
#include "lbridge/unify.hpp"
