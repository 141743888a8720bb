#ifndef OPTCE_OPTCE_HPP
#define OPTCE_OPTCE_HPP

#include "optce/colgen.hpp"
#include "optce/errors.hpp"
#include "optce/game.hpp"
#include "optce/generate.hpp"
#include "optce/io.hpp"
#include "optce/lp.hpp"
#include "optce/oracle.hpp"
#include "optce/solve.hpp"
#include "optce/verify.hpp"

#endif  // OPTCE_OPTCE_HPP
